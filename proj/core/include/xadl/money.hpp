// Copyright 2026 The xadl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace xadl {

// Exact fixed-point currency amount with 8 fractional digits.
class Money {
 public:
  static constexpr int kScale = 8;
  static constexpr std::int64_t kUnitsPerWhole = 100'000'000;

  constexpr Money() = default;
  static constexpr Money FromUnits(std::int64_t units) { return Money(units); }
  // Parses "229.5", "0.0085", "-1"; rejects more than 8 fractional digits.
  // Throws InvalidParameters.
  static Money Parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }

  // Fixed rendering with `places` fractional digits (0..8), rounding half
  // away from zero.
  std::string ToString(int places = 2) const;

  // Overflow throws InvalidParameters.
  Money operator*(std::int64_t n) const;
  Money operator+(Money other) const;

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

// n_requests × unit_cost, exactly. Both must be non-negative.
Money EstimateCost(std::int64_t n_requests, Money unit_cost);

}  // namespace xadl
