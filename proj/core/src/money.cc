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

#include "xadl/money.hpp"

#include <cctype>

#include "xadl/errors.hpp"

namespace xadl {
namespace {
__extension__ typedef __int128 Int128;
}  // namespace

Money Money::Parse(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw InvalidParameters("empty amount");
  Int128 whole = 0;
  Int128 frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw InvalidParameters("invalid amount '" + original + "'");
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InvalidParameters("invalid amount '" + original + "'");
    }
    any_digit = true;
    if (seen_dot) {
      if (++frac_digits > kScale) {
        throw InvalidParameters("amount '" + original + "' has more than 8 decimals");
      }
      frac = frac * 10 + (c - '0');
    } else {
      whole = whole * 10 + (c - '0');
      if (whole > INT64_MAX / kUnitsPerWhole) throw InvalidParameters("amount too large");
    }
  }
  if (!any_digit) throw InvalidParameters("invalid amount '" + original + "'");
  for (int i = frac_digits; i < kScale; ++i) frac *= 10;
  const auto units = static_cast<std::int64_t>(whole * kUnitsPerWhole + frac);
  return Money(negative ? -units : units);
}

std::string Money::ToString(int places) const {
  if (places < 0 || places > kScale) throw InvalidParameters("places must be in [0, 8]");
  std::int64_t step = 1;
  for (int i = places; i < kScale; ++i) step *= 10;
  const bool negative = units_ < 0;
  const Int128 magnitude = negative ? -static_cast<Int128>(units_) : units_;
  const Int128 rounded = (magnitude + step / 2) / step;  // in 10^-places units
  Int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const auto whole = static_cast<std::int64_t>(rounded / scale);
  auto frac = static_cast<std::int64_t>(rounded % scale);
  std::string out = (negative && rounded != 0 ? "-" : "") + std::to_string(whole);
  if (places > 0) {
    std::string digits = std::to_string(frac);
    out += '.' + std::string(places - digits.size(), '0') + digits;
  }
  return out;
}

Money Money::operator*(std::int64_t n) const {
  const Int128 product = static_cast<Int128>(units_) * n;
  if (product > INT64_MAX || product < INT64_MIN) throw InvalidParameters("amount overflow");
  return Money(static_cast<std::int64_t>(product));
}

Money Money::operator+(Money other) const {
  std::int64_t sum = 0;
  if (__builtin_add_overflow(units_, other.units_, &sum)) {
    throw InvalidParameters("amount overflow");
  }
  return Money(sum);
}

Money EstimateCost(std::int64_t n_requests, Money unit_cost) {
  if (n_requests < 0 || unit_cost.units() < 0) {
    throw InvalidParameters("cost inputs must be non-negative");
  }
  return unit_cost * n_requests;
}

}  // namespace xadl
