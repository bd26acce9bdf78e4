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

// Runs the ten acceptance checks and prints one PASS/FAIL line for each.
// Exit status is nonzero when any check fails or runs past its time budget.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "cases.hpp"
#include "oracles.hpp"
#include "xadl/cli.hpp"
#include "xadl/errors.hpp"
#include "xadl/evaluation.hpp"
#include "xadl/extract.hpp"
#include "xadl/gateway.hpp"
#include "xadl/heatmap.hpp"
#include "xadl/io.hpp"
#include "xadl/pairing.hpp"
#include "xadl/render.hpp"
#include "xadl/rng.hpp"
#include "xadl/segmentation.hpp"

namespace xadl {
namespace {

namespace fs = std::filesystem;
using testing::Clock;

// Thrown by Require; carries the first broken expectation.
struct CheckFailed {
  std::string what;
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed{what};
}

struct Cli {
  int code;
  std::string out;
  std::string err;
};

Cli Xadl(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path Scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("xadl_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// 1
void CostArithmetic() {
  const Cli r = Xadl({"cost", "--unit-cost", "0.0085", "--window-seconds", "16", "--overlap", "0.8", "--hours", "24"});
  Require(r.code == 0, "cost exited " + std::to_string(r.code) + ": " + r.err);
  Require(r.out == "27000 requests, 229.50/day\n", "cost printed: " + r.out);
  Require(std::abs(229.50 - 230.0) <= 0.5, "daily cost too far from 230");
}

// 2
void StrideCountLaw() {
  std::mt19937_64 rng(2);
  const int taus[] = {16, 60};
  const double overlaps[] = {0.0, 0.5, 0.8};
  for (int i = 0; i < 50; ++i) {
    const int tau = taus[UniformIndex(rng, 2)];
    const double o = overlaps[UniformIndex(rng, 3)];
    const std::int64_t d_ms = UniformInRange(rng, 0, 6 * 3600) * 1000 + UniformInRange(rng, 0, 999);
    const WindowSpec spec = WindowSpec::FromSeconds(tau, o);
    const std::int64_t tau_ms = tau * 1000;
    const auto stride_ms = static_cast<std::int64_t>(std::llround(tau_ms * (1.0 - o)));
    Require(spec.Stride().count() == stride_ms, "stride mismatch");
    const std::uint64_t law = d_ms < tau_ms ? 0 : static_cast<std::uint64_t>((d_ms - tau_ms) / stride_ms) + 1;
    const std::uint64_t brute = testing::EnumerateWindows(d_ms, tau_ms, stride_ms);
    const std::uint64_t got = WindowCount(Duration(d_ms), spec);
    const std::string tag = "tau=" + std::to_string(tau) + " o=" + std::to_string(o) + " D=" + std::to_string(d_ms);
    Require(law == brute, "law and enumerator disagree at " + tag);
    Require(got == law, "WindowCount " + std::to_string(got) + " != " + std::to_string(law) + " at " + tag);
    const Timestamp t0 = testing::RandomInstant(rng);
    const auto windows = Segment({}, spec, Interval{t0, t0 + Duration(d_ms)});
    Require(windows.size() == law, "Segment produced " + std::to_string(windows.size()) + " at " + tag);
    for (std::size_t k = 0; k < windows.size(); ++k) {
      Require(windows[k].start == t0 + Duration(static_cast<std::int64_t>(k) * stride_ms) &&
                  windows[k].end - windows[k].start == Duration(tau_ms),
              "window bounds at " + tag);
    }
  }
}

// 3
void Clipping() {
  std::mt19937_64 rng(3);
  const Timestamp base = Clock(0, 0);
  for (int i = 0; i < 1000; ++i) {
    auto a = UniformInRange(rng, 0, 600), b = UniformInRange(rng, 0, 600);
    auto c = UniformInRange(rng, 0, 600), d = UniformInRange(rng, 0, 600);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const SemanticState s{"StoveOn", base + Seconds(a), base + Seconds(b)};
    const auto clipped = ClipState(s, base + Seconds(c), base + Seconds(d));
    const auto lo = std::max(a, c), hi = std::min(b, d);
    if (lo > hi) {
      Require(!clipped.has_value(), "disjoint pair produced a state");
    } else {
      Require(clipped.has_value(), "overlapping pair dropped");
      Require(*clipped == SemanticState{"StoveOn", base + Seconds(lo), base + Seconds(hi)}, "wrong clipped bounds");
    }
  }
  const SemanticState fridge{"FridgeOpened", Clock(15, 34), Clock(15, 35)};
  Require(ClipState(fridge, Clock(15, 20), Clock(15, 40)) == fridge, "contained state altered");
  const SemanticState tv{"TelevisionOn", Clock(15, 12), Clock(15, 25)};
  Require(ClipState(tv, Clock(15, 20), Clock(15, 40)) ==
              SemanticState{"TelevisionOn", Clock(15, 20), Clock(15, 25)},
          "television state not clipped to [15:20, 15:25]");
}

// 4
void PairingOracle() {
  const SensorCatalog cat = testing::TwoSwitchCatalog();
  const std::vector<std::pair<std::string, std::string>> kinds{{"A", "On"}, {"A", "Off"}, {"B", "On"}, {"B", "Off"}};
  std::size_t cases = 0;
  for (int len = 0; len <= 6; ++len) {
    std::size_t total = 1;
    for (int k = 0; k < len; ++k) total *= kinds.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<SemanticEvent> events;
      std::size_t rest = code;
      for (int k = 0; k < len; ++k) {
        const auto& [entity, status] = kinds[rest % kinds.size()];
        rest /= kinds.size();
        events.push_back({entity, status, Clock(8, 0, k)});
      }
      const PairingResult got = PairEvents(events, cat);
      const testing::OracleStates want = testing::BruteForcePair(events, cat);
      auto states = got.states;
      std::sort(states.begin(), states.end(), [](const auto& x, const auto& y) {
        return std::tie(x.start, x.property, x.end) < std::tie(y.start, y.property, y.end);
      });
      Require(states == want.states, "state sets differ for sequence " + std::to_string(code) + " of length " +
                                         std::to_string(len));
      Require(got.unpaired.size() == want.unpaired, "unpaired counts differ for sequence " + std::to_string(code) +
                                                        " of length " + std::to_string(len));
      ++cases;
    }
  }
  Require(cases == 5461, "enumerated " + std::to_string(cases) + " sequences");
}

// 5
void RoundTripAndGoldens() {
  const SensorCatalog cat = testing::HomeCatalog();
  const std::vector<std::string> props{"FridgeOpened", "StoveOn",  "TelevisionOn",
                                       "InKitchen",    "OnCouch", "MedicineDrawerOpen"};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    StateWindow w;
    w.start = testing::RandomInstant(rng);
    const auto len = UniformInRange(rng, 1, 120);
    w.end = w.start + Seconds(len);
    for (auto k = UniformInRange(rng, 0, 8); k > 0; --k) {
      auto a = UniformInRange(rng, 0, len), b = UniformInRange(rng, 0, len);
      if (a > b) std::swap(a, b);
      w.states.push_back({props[UniformIndex(rng, props.size())], w.start + Seconds(a), w.start + Seconds(b)});
    }
    std::sort(w.states.begin(), w.states.end(), [](const auto& x, const auto& y) {
      return std::tie(x.start, x.property, x.end) < std::tie(y.start, y.property, y.end);
    });
    w.states.erase(std::unique(w.states.begin(), w.states.end()), w.states.end());
    StateWindow back = ParseRenderedWindow(RenderWindow(w, cat), cat, w.start);
    back.index = w.index;
    Require(back == w, "round trip changed window " + std::to_string(i));
  }
  const std::string dir = XADL_GOLDEN_DIR;
  for (const auto& [file, w] : testing::GoldenWindows()) {
    Require(fs::exists(dir + "/" + file), "missing golden " + file);
    Require(ReadFile(dir + "/" + file) == RenderWindow(w, cat), "golden differs: " + file);
  }
  for (const auto& g : testing::GoldenAttributionSets()) {
    Require(fs::exists(dir + "/" + g.file), "missing golden " + g.file);
    Require(ReadFile(dir + "/" + g.file) == RenderAttributions(g.attrs, g.window, cat), "golden differs: " + g.file);
  }
}

// 6
void Extractor() {
  const ActivitySet marble({"clearing table", "eating", "entering home", "leaving home", "phone call",
                            "preparing cold meal", "preparing hot meal", "setting up table", "taking medicines",
                            "using pc", "watching tv"});
  Require(marble.size() == 11, "label set size");
  for (const auto& label : marble.labels()) {
    const Extraction ex = Extract(RenderEnvelope(label, "the states support it"), marble, ExtractionMode::kE2e);
    Require(ex.activity == label && ex.explanation == "the states support it", "envelope round trip for " + label);
  }
  const std::pair<std::string, std::string> free_text[] = {
      {"I predicted the activity PREPARING COLD MEAL because the subject moved from the kitchen to the dining room "
       "while showing dynamic hand movements, suggesting they were preparing something to eat",
       "preparing cold meal"},
      {"I predicted the activity EATING mainly because the subject was seated in the dining room and actively "
       "using their hands, which is consistent with eating.",
       "eating"},
      {"I predicted the activity WATCHING TV mainly because the subject was sitting in the living room with the TV "
       "on and was making hand movements, which suggests they were interacting with the TV or a remote control.",
       "watching tv"},
  };
  for (const auto& [text, label] : free_text) {
    const Extraction ex = Extract(text, marble, ExtractionMode::kE2e);
    Require(ex.activity == label, "free text gave '" + ex.activity + "', wanted '" + label + "'");
    Require(!ex.explanation.empty(), "free text lost its explanation");
  }
  bool thrown = false;
  try {
    Extract(RenderEnvelope("doing laundry", "the washer ran"), marble, ExtractionMode::kE2e);
  } catch (const HallucinatedLabel&) {
    thrown = true;
  }
  Require(thrown, "label outside the set was accepted");
}

// 7
void MetricsOracle() {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const int n = static_cast<int>(UniformInRange(rng, 2, 6));
    std::vector<std::string> labels;
    for (int k = 0; k < n; ++k) labels.push_back("class " + std::to_string(k));
    const ActivitySet acts(labels);
    const auto m = UniformInRange(rng, 1, 300);
    std::vector<int> truth, predicted;
    std::vector<ScoredPair> pairs;
    for (std::int64_t k = 0; k < m; ++k) {
      const int y = static_cast<int>(UniformIndex(rng, n));
      const int p = static_cast<int>(UniformInRange(rng, -1, n - 1));
      truth.push_back(y);
      predicted.push_back(p);
      ScoredPair sp{labels[y], p < 0 ? std::string() : labels[p]};
      if (p < 0) sp.status = PredictionStatus::kUnparseable;
      pairs.push_back(sp);
    }
    const EvalReport got = Score(pairs, acts);
    const testing::OracleMetrics want = testing::BruteForceMetrics(truth, predicted, n);
    Require(std::abs(got.weighted_f1 - want.weighted_f1) <= 1e-12, "weighted F1 differs in trial " + std::to_string(t));
    Require(got.confusion == want.confusion, "confusion differs in trial " + std::to_string(t));
    for (int k = 0; k < n; ++k) {
      Require(std::abs(got.classes[k].f1 - want.f1[k]) <= 1e-12 &&
                  std::abs(got.classes[k].precision - want.precision[k]) <= 1e-12 &&
                  std::abs(got.classes[k].recall - want.recall[k]) <= 1e-12 &&
                  got.classes[k].support == want.support[k],
              "per-class metrics differ in trial " + std::to_string(t));
    }
    std::vector<ScoredPair> perfect;
    for (int y : truth) perfect.push_back({labels[y], labels[y]});
    Require(Score(perfect, acts).weighted_f1 == 1.0, "perfect predictions not exactly 1.0");
  }
}

// 8
constexpr const char* kScenario = R"({
  "start": "2024-03-04 08:00:00", "duration_seconds": 2448, "gapless": true,
  "activities": [
    {"label": "cooking", "duration_seconds": [120, 400],
     "templates": [{"entity": "Stove", "label": "the stove is on"}]},
    {"label": "watching tv", "duration_seconds": [120, 400],
     "templates": [{"entity": "Television", "label": "the television is on"}]},
    {"label": "sleeping", "duration_seconds": [120, 400],
     "templates": [{"entity": "Bed", "label": "someone is lying in bed"}]}]})";

nlohmann::json RunOffline(const fs::path& root, const std::string& rules) {
  const auto p = [&](const std::string& name) { return (root / name).string(); };
  const Cli cls = Xadl({"classify", "--windows", p("norm/windows.jsonl"), "--catalog", p("norm/catalog.json"),
                        "--profile", p("norm/profile.json"), "--backend", "mock", "--rules", rules, "--out",
                        p("norm/predictions.jsonl")});
  Require(cls.code == 0, "classify failed: " + cls.err);
  const Cli ev = Xadl({"evaluate", "--predictions", p("norm/predictions.jsonl"), "--truth", p("norm/truth.csv"),
                       "--profile", p("norm/profile.json"), "--out", p("eval")});
  Require(ev.code == 0, "evaluate failed: " + ev.err);
  return nlohmann::json::parse(ReadFile(p("eval/report.json")));
}

void CheckConfusion(const nlohmann::json& report) {
  const auto& counts = report["confusion"]["counts"];
  std::size_t total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    std::size_t row = 0;
    for (const auto& c : counts[k]) row += c.get<std::size_t>();
    Require(row == report["classes"][k]["support"].get<std::size_t>(), "confusion row sum differs from support");
    total += row;
  }
  Require(total == report["scored"].get<std::size_t>(), "confusion total differs from scored");
}

void OfflineEndToEnd() {
  const fs::path root = Scratch("e2e");
  const auto p = [&](const std::string& name) { return (root / name).string(); };
  WriteFileAtomic(p("scenario.json"), kScenario);
  Cli r = Xadl({"synth", "--scenario", p("scenario.json"), "--seed", "3", "--out", p("syn")});
  Require(r.code == 0, "synth failed: " + r.err);
  r = Xadl({"ingest", p("syn"), "--format", "generic-csv", "--catalog", p("syn/catalog.json"), "--profile",
            p("syn/profile.json"), "--out", p("norm")});
  Require(r.code == 0, "ingest failed: " + r.err);
  r = Xadl({"segment", "--in", p("norm"), "--window-seconds", "60", "--overlap", "0.8"});
  Require(r.code == 0, "segment failed: " + r.err);
  Require(r.out.rfind("200 windows", 0) == 0, "segment printed: " + r.out);

  const nlohmann::json clean = RunOffline(root, p("syn/mock_rules.json"));
  Require(clean["scored"] == 200, "scored " + clean["scored"].dump() + " windows");
  Require(clean["weighted_f1"].get<double>() == 1.0, "clean weighted F1 " + clean["weighted_f1"].dump());
  CheckConfusion(clean);

  auto rules = nlohmann::json::parse(ReadFile(p("syn/mock_rules.json")));
  Require(rules["rules"].size() == 3, "expected one rule per activity");
  rules["rules"][0]["activity"] = rules["rules"][1]["activity"];
  WriteFileAtomic(p("corrupt_rules.json"), rules.dump(2));
  const nlohmann::json corrupt = RunOffline(root, p("corrupt_rules.json"));
  Require(corrupt["weighted_f1"].get<double>() < 1.0, "corrupted weighted F1 " + corrupt["weighted_f1"].dump());
  CheckConfusion(corrupt);
  fs::remove_all(root);
}

// 9
class FlakyBackend final : public CompletionBackend {
 public:
  BackendReply Send(const CompletionRequest& r) override {
    BackendReply reply;
    if (++calls <= 2) {
      reply.outcome = AttemptOutcome::kTransient;
      reply.http_status = 429;
      return reply;
    }
    reply.completion = {"ok " + r.user, {1, 1}};
    return reply;
  }
  std::atomic<int> calls{0};
};

class CountingBackend final : public CompletionBackend {
 public:
  BackendReply Send(const CompletionRequest&) override {
    const int now = ++in_flight;
    int seen = max_seen.load();
    while (now > seen && !max_seen.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(3));
    --in_flight;
    BackendReply reply;
    reply.completion = {"ok", {1, 1}};
    return reply;
  }
  std::atomic<int> in_flight{0};
  std::atomic<int> max_seen{0};
};

void GatewayPolicyCheck() {
  GatewayPolicy policy;
  policy.base_backoff = Duration(1000);
  policy.backoff_multiplier = 3.0;
  policy.max_retries = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    policy.jitter_seed = seed;
    auto clock = std::make_shared<SimulatedClock>();
    auto flaky = std::make_shared<FlakyBackend>();
    Gateway g(flaky, policy, clock);
    CompletionRequest req;
    req.system = "s";
    req.user = "u";
    Require(g.Complete(req).text == "ok u", "flaky request did not succeed");
    Require(flaky->calls == 3, "expected three attempts");
    const auto sleeps = clock->sleeps();
    Require(sleeps.size() == 2, "expected two backoff sleeps");
    Require(sleeps[0] >= Duration(1000) && sleeps[0] < Duration(2000), "first delay out of [base, 2 base)");
    Require(sleeps[1] >= Duration(3000) && sleeps[1] < Duration(4000), "second delay out of [base m, base m + base)");
  }

  GatewayPolicy bounded;
  bounded.max_concurrent_requests = 4;
  auto counting = std::make_shared<CountingBackend>();
  Gateway g(counting, bounded, std::make_shared<SimulatedClock>());
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 100; ++i) {
    futures.push_back(std::async(std::launch::async, [&g, i] {
      CompletionRequest req;
      req.system = "s";
      req.user = "request " + std::to_string(i);
      return g.Complete(req).text;
    }));
  }
  for (auto& f : futures) Require(f.get() == "ok", "parallel request failed");
  Require(counting->max_seen <= 4, "observed " + std::to_string(counting->max_seen.load()) + " concurrent sends");
  Require(g.stats().max_in_flight <= 4, "gateway reported more than 4 in flight");
  Require(g.stats().requests == 100, "request count");
}

// 10
void HeatmapAdapter() {
  const ActivitySet acts({"preparing hot meal", "eating", "watching tv"});
  const std::map<std::string, std::string, std::less<>> names{{"stove", "StoveOn"},
                                                              {"kitchen", "InKitchen"},
                                                              {"fridge", "FridgeOpened"},
                                                              {"tv", "TelevisionOn"},
                                                              {"couch", "OnCouch"}};
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    HeatmapExplanation hm;
    for (const auto& [feature, _] : names) {
      HeatmapRow row{feature, {}};
      std::int64_t at = 0;
      for (auto s = UniformInRange(rng, 0, 4); s > 0; --s) {
        const auto from = at + UniformInRange(rng, 0, 3);
        const auto to = from + UniformInRange(rng, 0, 3);
        row.segments.push_back({Clock(12, 0, 0) + Seconds(from), Clock(12, 0, 0) + Seconds(to), u(rng)});
        at = to + 1;
      }
      hm.rows.push_back(row);
    }
    const double hi = u(rng), lo = hi * u(rng);
    const auto a_hi = HeatmapToAttributions(hm, hi, "eating", acts, names);
    const auto a_lo = HeatmapToAttributions(hm, lo, "eating", acts, names);
    for (const auto& f : a_hi.features) {
      Require(std::any_of(a_lo.features.begin(), a_lo.features.end(),
                          [&](const AttributedFeature& g) { return g.property == f.property; }),
              "lowering the threshold removed " + f.property + " in trial " + std::to_string(t));
    }
  }

  const HeatmapExplanation meal{{
      {"stove", {{Clock(12, 0, 2), Clock(12, 0, 9), 0.92}}},
      {"kitchen", {{Clock(12, 0, 0), Clock(12, 0, 16), 0.71}}},
      {"fridge", {{Clock(12, 0, 1), Clock(12, 0, 3), 0.12}}},
      {"tv", {{Clock(12, 0, 0), Clock(12, 0, 16), 0.05}}},
      {"couch", {}},
  }};
  const AttributionSet attrs = HeatmapToAttributions(meal, 0.5, "Preparing Hot Meal", acts, names);
  Require(attrs.predicted_activity == "preparing hot meal", "predicted label not canonical");
  const std::string rendered =
      RenderAttributions(attrs, Interval{Clock(12, 0, 0), Clock(12, 0, 16)}, testing::HomeCatalog());
  const auto doc = nlohmann::ordered_json::parse(rendered);
  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  Require(keys.size() == 3 && keys[0] == "Time window", "rendered keys: " + doc.dump());
  Require(std::is_permutation(keys.begin() + 1, keys.end(),
                              std::vector<std::string>{"the stove is on", "the subject is in the kitchen"}.begin()),
          "important rows not rendered: " + doc.dump());
  Require(doc["Time window"] == nlohmann::ordered_json::array({"12:00:00", "12:00:16"}), "window bounds");
  Require(doc["the stove is on"] == nlohmann::ordered_json::array({nlohmann::ordered_json::array({"12:00:02", "12:00:09"})}),
          "stove interval");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void()> run;
};

}  // namespace
}  // namespace xadl

int main() {
  using namespace xadl;
  const std::vector<Criterion> criteria{
      {1, "cost arithmetic", 1, CostArithmetic},
      {2, "stride/count law", 5, StrideCountLaw},
      {3, "clipping", 5, Clipping},
      {4, "pairing oracle", 30, PairingOracle},
      {5, "render round trip and goldens", 5, RoundTripAndGoldens},
      {6, "extractor", 1, Extractor},
      {7, "metrics oracle", 5, MetricsOracle},
      {8, "offline end to end", 60, OfflineEndToEnd},
      {9, "gateway policy", 10, GatewayPolicyCheck},
      {10, "heatmap adapter", 5, HeatmapAdapter},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const CheckFailed& e) {
      detail = e.what;
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (detail.empty() && secs >= c.budget_seconds) detail = "over the time budget";
    char line[256];
    std::snprintf(line, sizeof line, "%s %2d %-32s %7.3fs (budget %.0fs)", detail.empty() ? "PASS" : "FAIL", c.id,
                  c.name, secs, c.budget_seconds);
    std::cout << line;
    if (!detail.empty()) std::cout << "  " << detail;
    std::cout << "\n";
    failed += !detail.empty();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
