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

#include "xadl/cli.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "xadl/archive.hpp"
#include "xadl/backends.hpp"
#include "xadl/catalog.hpp"
#include "xadl/digest.hpp"
#include "xadl/errors.hpp"
#include "xadl/evaluation.hpp"
#include "xadl/extract.hpp"
#include "xadl/gateway.hpp"
#include "xadl/heatmap.hpp"
#include "xadl/ingestion.hpp"
#include "xadl/io.hpp"
#include "xadl/money.hpp"
#include "xadl/pairing.hpp"
#include "xadl/prompts.hpp"
#include "xadl/render.hpp"
#include "xadl/segmentation.hpp"
#include "xadl/synth.hpp"

namespace xadl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kApiKeyEnv = "XADL_API_KEY";

// Effective settings after layering defaults < config file < environment
// < flags.
struct Settings {
  std::string model = "gpt-4o";
  double temperature = 0.0;
  int max_output_tokens = 1024;
  HttpBackendConfig http;
  GatewayPolicy policy;
  std::size_t max_prompt_tokens = 16000;
  std::string templates_dir;
  double window_seconds = 16.0;
  double overlap = 0.8;
};

template <typename T>
T ConfigValue(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

void ApplyGatewayConfig(GatewayPolicy& p, const json& g) {
  if (!g.is_object()) throw UsageError("config key 'gateway' must be an object");
  for (const auto& [key, v] : g.items()) {
    if (key == "max_concurrent_requests") p.max_concurrent_requests = ConfigValue<int>(v, key);
    else if (key == "max_retries") p.max_retries = ConfigValue<int>(v, key);
    else if (key == "base_backoff_ms") p.base_backoff = Duration(ConfigValue<std::int64_t>(v, key));
    else if (key == "backoff_multiplier") p.backoff_multiplier = ConfigValue<double>(v, key);
    else if (key == "queue_capacity") p.queue_capacity = ConfigValue<std::size_t>(v, key);
    else if (key == "requests_per_minute") p.requests_per_minute = ConfigValue<int>(v, key);
    else if (key == "tokens_per_minute") p.tokens_per_minute = ConfigValue<std::int64_t>(v, key);
    else if (key == "jitter_seed") p.jitter_seed = ConfigValue<std::uint64_t>(v, key);
    else throw UsageError("unknown config key 'gateway." + key + "'");
  }
}

void ApplyConfigFile(Settings& s, const std::string& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config file must hold an object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "api_key") {
      throw UsageError(std::string("the API key is read from $") + kApiKeyEnv + " only");
    } else if (key == "model") s.model = ConfigValue<std::string>(v, key);
    else if (key == "temperature") s.temperature = ConfigValue<double>(v, key);
    else if (key == "max_output_tokens") s.max_output_tokens = ConfigValue<int>(v, key);
    else if (key == "base_url") s.http.base_url = ConfigValue<std::string>(v, key);
    else if (key == "api_path") s.http.path = ConfigValue<std::string>(v, key);
    else if (key == "auth_header") s.http.auth_header = ConfigValue<std::string>(v, key);
    else if (key == "auth_scheme") s.http.auth_scheme = ConfigValue<std::string>(v, key);
    else if (key == "timeout_seconds") {
      s.http.timeout = Duration(std::llround(ConfigValue<double>(v, key) * 1000.0));
    } else if (key == "max_prompt_tokens") s.max_prompt_tokens = ConfigValue<std::size_t>(v, key);
    else if (key == "templates") s.templates_dir = ConfigValue<std::string>(v, key);
    else if (key == "window_seconds") s.window_seconds = ConfigValue<double>(v, key);
    else if (key == "overlap") s.overlap = ConfigValue<double>(v, key);
    else if (key == "gateway") ApplyGatewayConfig(s.policy, v);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

std::optional<std::string> Env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

double EnvNumber(const char* name, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("$") + name + " is not a number");
}

void ApplyEnvironment(Settings& s) {
  if (auto v = Env("XADL_MODEL")) s.model = *v;
  if (auto v = Env("XADL_BASE_URL")) s.http.base_url = *v;
  if (auto v = Env("XADL_API_PATH")) s.http.path = *v;
  if (auto v = Env("XADL_TEMPLATES")) s.templates_dir = *v;
  if (auto v = Env("XADL_CONCURRENCY")) {
    s.policy.max_concurrent_requests = static_cast<int>(EnvNumber("XADL_CONCURRENCY", *v));
  }
  if (auto v = Env("XADL_MAX_RETRIES")) {
    s.policy.max_retries = static_cast<int>(EnvNumber("XADL_MAX_RETRIES", *v));
  }
  if (auto v = Env("XADL_TIMEOUT_SECONDS")) {
    s.http.timeout = Duration(std::llround(EnvNumber("XADL_TIMEOUT_SECONDS", *v) * 1000.0));
  }
  if (auto v = Env("XADL_WINDOW_SECONDS")) s.window_seconds = EnvNumber("XADL_WINDOW_SECONDS", *v);
  if (auto v = Env("XADL_OVERLAP")) s.overlap = EnvNumber("XADL_OVERLAP", *v);
  if (auto v = Env(kApiKeyEnv)) s.http.api_key = *v;
}

// Flags shared by several subcommands; applied last.
struct CommonFlags {
  std::string config;
  std::string model;
  int concurrency = 0;
  int max_retries = 0;
  double timeout_seconds = 0;
  std::string base_url;
  std::string templates;
  std::size_t max_prompt_tokens = 0;
  CLI::Option* model_opt = nullptr;
  CLI::Option* concurrency_opt = nullptr;
  CLI::Option* retries_opt = nullptr;
  CLI::Option* timeout_opt = nullptr;
  CLI::Option* base_url_opt = nullptr;
  CLI::Option* templates_opt = nullptr;
  CLI::Option* prompt_tokens_opt = nullptr;
};

struct WindowFlags {
  double window_seconds = 0;
  double overlap = 0;
  CLI::Option* seconds_opt = nullptr;
  CLI::Option* overlap_opt = nullptr;

  void Attach(CLI::App* cmd) {
    seconds_opt = cmd->add_option("--window-seconds", window_seconds, "Window length in seconds");
    overlap_opt = cmd->add_option("--overlap", overlap, "Overlap fraction in [0, 1)");
  }
};

Settings LoadSettings(const CommonFlags& f, const WindowFlags* w = nullptr) {
  Settings s;
  if (!f.config.empty()) ApplyConfigFile(s, f.config);
  ApplyEnvironment(s);
  if (f.model_opt && f.model_opt->count()) s.model = f.model;
  if (f.concurrency_opt && f.concurrency_opt->count()) s.policy.max_concurrent_requests = f.concurrency;
  if (f.retries_opt && f.retries_opt->count()) s.policy.max_retries = f.max_retries;
  if (f.timeout_opt && f.timeout_opt->count()) {
    s.http.timeout = Duration(std::llround(f.timeout_seconds * 1000.0));
  }
  if (f.base_url_opt && f.base_url_opt->count()) s.http.base_url = f.base_url;
  if (f.templates_opt && f.templates_opt->count()) s.templates_dir = f.templates;
  if (f.prompt_tokens_opt && f.prompt_tokens_opt->count()) s.max_prompt_tokens = f.max_prompt_tokens;
  if (w != nullptr) {
    if (w->seconds_opt->count()) s.window_seconds = w->window_seconds;
    if (w->overlap_opt->count()) s.overlap = w->overlap;
  }
  s.policy.Validate();
  return s;
}

std::string Join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

ActivitySet ResolveActivities(const std::string& profile_path, const std::string& activities) {
  if (!activities.empty()) return ActivitySet(SplitList(activities));
  if (!profile_path.empty()) return HomeProfile::Load(profile_path).activities;
  throw UsageError("candidate activities needed: pass --profile or --activities");
}

DatasetFormat FormatFrom(const std::string& name) {
  auto f = ParseDatasetFormat(name);
  if (!f) throw UsageError("unknown format '" + name + "'");
  return *f;
}

// Files with extension `ext` in `path` sorted by name, or `path` itself.
std::vector<fs::path> FilesIn(const std::string& path, const std::string& ext) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.emplace_back(path);
  } else {
    throw IoError("no such file or directory: " + path);
  }
  return files;
}

std::string Padded(std::size_t index) {
  std::string s = std::to_string(index);
  return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first
// exception stops the remaining work and is rethrown.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  const auto worker = [&] {
    for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

struct BackendFlags {
  std::string backend = "mock";
  std::string rules;
  std::string fixtures;
  bool record = false;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "Completion backend")
        ->check(CLI::IsMember({"http", "mock", "replay"}))
        ->capture_default_str();
    cmd->add_option("--rules", rules, "Rule file for the mock backend");
    cmd->add_option("--fixtures", fixtures, "Fixture directory (replay, or http with --record)");
    cmd->add_flag("--record", record, "Save http responses as fixtures");
  }
};

std::unique_ptr<Gateway> MakeGateway(const BackendFlags& b, Settings& s) {
  std::shared_ptr<CompletionBackend> backend;
  if (b.backend == "mock") {
    if (b.rules.empty()) throw UsageError("--backend mock needs --rules");
    backend = std::make_shared<MockBackend>(RuleResponder::Load(b.rules));
  } else if (b.backend == "replay") {
    if (b.fixtures.empty()) throw UsageError("--backend replay needs --fixtures");
    backend = std::make_shared<ReplayBackend>(std::make_shared<FixtureStore>(b.fixtures));
  } else {
    if (s.http.api_key.empty()) {
      throw UsageError(std::string("--backend http needs $") + kApiKeyEnv);
    }
    backend = std::make_shared<HttpBackend>(s.http);
    if (b.record) {
      if (b.fixtures.empty()) throw UsageError("--record needs --fixtures");
      backend = std::make_shared<RecordingBackend>(backend, std::make_shared<FixtureStore>(b.fixtures));
    }
  }
  if (b.backend != "http") {
    s.policy.requests_per_minute = INT_MAX;
    s.policy.tokens_per_minute = INT64_MAX;
  }
  return std::make_unique<Gateway>(backend, s.policy);
}

TemplateSet LoadTemplates(const Settings& s) {
  return s.templates_dir.empty() ? TemplateSet::Defaults() : TemplateSet::FromDirectory(s.templates_dir);
}

// Sends one request and fills the outcome fields of `rec`. Retry
// exhaustion and timeouts become provider_error records; fatal provider
// errors propagate.
void Complete(Gateway& gateway, const CompletionRequest& req, const ActivitySet& activities,
              ExtractionMode mode, PredictionRecord& rec) {
  rec.prompt_fingerprint = PromptFingerprint(req.system, req.user);
  Completion completion;
  try {
    completion = gateway.Complete(req);
  } catch (const RateLimitedExhausted& e) {
    rec.status = PredictionStatus::kProviderError;
    rec.error = e.what();
    return;
  } catch (const Timeout& e) {
    rec.status = PredictionStatus::kProviderError;
    rec.error = e.what();
    return;
  }
  rec.raw_model_output = completion.text;
  rec.usage = completion.usage;
  try {
    Extraction ex = Extract(completion.text, activities, mode);
    if (mode == ExtractionMode::kE2e) rec.predicted_activity = ex.activity;
    rec.explanation = ex.explanation;
    rec.status = PredictionStatus::kOk;
  } catch (const HallucinatedLabel& e) {
    rec.status = PredictionStatus::kHallucinated;
    rec.error = e.what();
  } catch (const MissingExplanation& e) {
    rec.status = PredictionStatus::kMissingExplanation;
    rec.error = e.what();
  } catch (const UnparseableOutput& e) {
    rec.status = PredictionStatus::kUnparseable;
    rec.error = e.what();
  }
}

std::string StatusSummary(std::span<const PredictionRecord> records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[std::string(ToString(r.status))];
  std::string out;
  for (const auto& [status, n] : counts) {
    if (!out.empty()) out += ", ";
    out += std::to_string(n) + " " + status;
  }
  return out.empty() ? "nothing" : out;
}

// ---- subcommands ---------------------------------------------------------

struct IngestArgs {
  std::string dataset_dir;
  std::string format = "generic-csv";
  std::string catalog;
  std::string profile;
  std::string activities;
  std::string events_file;
  std::string truth_file;
  std::string exclude;
  std::vector<std::string> aliases;
  std::string out = ".";
};

std::string FindByPattern(const std::string& dir, const std::string& needle) {
  std::vector<fs::path> hits;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.find(needle) != std::string::npos) hits.push_back(entry.path());
  }
  std::sort(hits.begin(), hits.end());
  return hits.empty() ? std::string() : hits.front().string();
}

int Ingest(const IngestArgs& a, std::ostream& out) {
  if (!fs::is_directory(a.dataset_dir)) throw IoError("not a directory: " + a.dataset_dir);
  const DatasetFormat format = FormatFrom(a.format);
  const SensorCatalog catalog = SensorCatalog::Load(a.catalog);

  const auto inside = [&](const std::string& name) {
    return name.empty() || fs::exists(name) ? name : Join(a.dataset_dir, name);
  };
  std::string events_path = inside(a.events_file);
  std::string truth_path = inside(a.truth_file);
  if (format == DatasetFormat::kUciAdl) {
    if (events_path.empty()) events_path = FindByPattern(a.dataset_dir, "Sensors");
    if (truth_path.empty()) truth_path = FindByPattern(a.dataset_dir, "ADLs");
  } else {
    if (events_path.empty()) events_path = Join(a.dataset_dir, "events.csv");
    if (truth_path.empty()) truth_path = Join(a.dataset_dir, "truth.csv");
  }
  if (events_path.empty() || !fs::exists(events_path)) {
    throw IoError("event log not found in " + a.dataset_dir);
  }
  const auto events = ParseEventLog(ReadFile(events_path), format, catalog);

  std::vector<GroundTruthInterval> truth;
  const bool have_truth = !truth_path.empty() && fs::exists(truth_path);
  if (have_truth) {
    TruthOptions options;
    for (const auto& e : SplitList(a.exclude)) options.excluded.insert(NormalizeLabel(e));
    for (const auto& alias : a.aliases) {
      const auto eq = alias.find('=');
      if (eq == std::string::npos) throw UsageError("--alias expects FROM=TO, got '" + alias + "'");
      options.aliases[NormalizeLabel(alias.substr(0, eq))] = alias.substr(eq + 1);
    }
    truth = ParseGroundTruth(ReadFile(truth_path), format, ResolveActivities(a.profile, a.activities),
                             options);
  }

  const fs::path dir(a.out);
  WriteFileAtomic(Join(dir, "events.csv"), SerializeEvents(events));
  if (have_truth) WriteFileAtomic(Join(dir, "truth.csv"), SerializeGroundTruth(truth));
  WriteFileAtomic(Join(dir, "catalog.json"), catalog.ToJson());
  if (!a.profile.empty()) WriteFileAtomic(Join(dir, "profile.json"), HomeProfile::Load(a.profile).ToJson());
  out << "ingested " << events.size() << " events";
  if (have_truth) out << ", " << truth.size() << " truth intervals";
  out << " into " << a.out << "\n";
  return 0;
}

struct SegmentArgs {
  std::string in = ".";
  std::string catalog;
  std::string out;
  std::string span_start;
  std::string span_end;
  bool close_dangling = false;
};

int Segment(const SegmentArgs& a, const Settings& s, std::ostream& out) {
  const fs::path in(a.in);
  const SensorCatalog catalog = SensorCatalog::Load(a.catalog.empty() ? Join(in, "catalog.json") : a.catalog);
  const auto events = ParseEventLog(ReadFile(Join(in, "events.csv")), DatasetFormat::kGenericCsv, catalog);
  PairingOptions options;
  options.close_dangling_at_stream_end = a.close_dangling;
  const PairingResult paired = PairEvents(events, catalog, options);

  const WindowSpec spec = WindowSpec::FromSeconds(s.window_seconds, s.overlap);
  Interval span = StateSpan(paired.states);
  if (!a.span_start.empty()) span.start = Timestamp::Parse(a.span_start);
  if (!a.span_end.empty()) span.end = Timestamp::Parse(a.span_end);
  std::vector<StateWindow> windows;
  if (!paired.states.empty() || (!a.span_start.empty() && !a.span_end.empty())) {
    windows = Segment(paired.states, spec, span);
  }

  const fs::path dir(a.out.empty() ? a.in : a.out);
  WriteFileAtomic(Join(dir, "windows.jsonl"), SerializeWindows(windows));
  WriteFileAtomic(Join(dir, "unpaired.csv"), SerializeUnpaired(paired.unpaired));
  std::size_t empty = 0;
  for (const auto& w : windows) empty += w.empty() ? 1 : 0;
  out << windows.size() << " windows (" << empty << " empty), " << paired.states.size() << " states, "
      << paired.unpaired.size() << " unpaired events\n";
  return 0;
}

struct RenderArgs {
  std::string mode = "window";
  std::string windows;
  std::string attributions;
  std::string catalog;
  std::string out = "rendered";
};

Interval AttributionWindow(const AttributionSet& attrs) {
  if (attrs.window) return *attrs.window;
  std::optional<Interval> hull;
  for (const auto& f : attrs.features) {
    for (const auto& iv : f.intervals) {
      if (!hull) hull = iv;
      hull->start = std::min(hull->start, iv.start);
      hull->end = std::max(hull->end, iv.end);
    }
  }
  if (!hull) throw SchemaViolation("attribution set has neither a window nor any interval");
  return *hull;
}

int Render(const RenderArgs& a, std::ostream& out) {
  const SensorCatalog catalog = SensorCatalog::Load(a.catalog);
  const fs::path dir(a.out);
  std::size_t written = 0;
  if (a.mode == "window") {
    if (a.windows.empty()) throw UsageError("--mode window needs --windows");
    for (const auto& w : ParseWindows(ReadFile(a.windows))) {
      WriteFileAtomic(Join(dir, "window_" + Padded(w.index) + ".json"), RenderWindow(w, catalog));
      ++written;
    }
  } else {
    if (a.attributions.empty()) throw UsageError("--mode attributions needs --attributions");
    for (const auto& file : FilesIn(a.attributions, ".json")) {
      const AttributionSet attrs = LoadAttributionInterchange(ReadFile(file.string()));
      WriteFileAtomic(Join(dir, file.stem().string() + ".rendered.json"),
                      RenderAttributions(attrs, AttributionWindow(attrs), catalog));
      ++written;
    }
  }
  out << "rendered " << written << " file(s) into " << a.out << "\n";
  return 0;
}

struct ClassifyArgs {
  std::string mode = "e2e";
  std::string windows = "windows.jsonl";
  std::string catalog;
  std::string profile;
  std::string out = "predictions.jsonl";
  bool include_empty = false;
  BackendFlags backend;
};

int Classify(const ClassifyArgs& a, Settings s, std::ostream& out) {
  if (a.mode != "e2e") throw UsageError("classify supports --mode e2e only; use `explain` for attributions");
  const SensorCatalog catalog = SensorCatalog::Load(a.catalog);
  const HomeProfile profile = HomeProfile::Load(a.profile);
  const auto windows = ParseWindows(ReadFile(a.windows));
  const PromptBuilder builder(LoadTemplates(s), s.max_prompt_tokens);
  const std::string system = builder.BuildE2eSystemPrompt(profile);
  auto gateway = MakeGateway(a.backend, s);

  std::vector<PredictionRecord> records(windows.size());
  ParallelFor(windows.size(), s.policy.max_concurrent_requests, [&](std::size_t i) {
    const StateWindow& w = windows[i];
    PredictionRecord& rec = records[i];
    rec.window = {w.index, w.start, w.end};
    if (w.empty() && !a.include_empty) {
      rec.status = PredictionStatus::kSkipped;
      return;
    }
    CompletionRequest req;
    req.system = system;
    req.user = builder.BuildE2eUserPrompt(RenderWindow(w, catalog));
    req.model_id = s.model;
    req.temperature = s.temperature;
    req.max_output_tokens = s.max_output_tokens;
    Complete(*gateway, req, profile.activities, ExtractionMode::kE2e, rec);
  });
  WriteFileAtomic(a.out, SerializePredictions(records));
  out << "classified " << records.size() << " windows: " << StatusSummary(records) << "\n";
  return 0;
}

struct ExplainArgs {
  std::string attributions;
  std::string catalog;
  std::string profile;
  std::string out = "explanations.jsonl";
  BackendFlags backend;
};

int Explain(const ExplainArgs& a, Settings s, std::ostream& out) {
  const SensorCatalog catalog = SensorCatalog::Load(a.catalog);
  const HomeProfile profile = HomeProfile::Load(a.profile);
  std::vector<AttributionSet> sets;
  for (const auto& file : FilesIn(a.attributions, ".json")) {
    sets.push_back(LoadAttributionInterchange(ReadFile(file.string())));
  }
  const PromptBuilder builder(LoadTemplates(s), s.max_prompt_tokens);
  const std::string system = builder.BuildExplainerSystemPrompt(profile);
  auto gateway = MakeGateway(a.backend, s);

  std::vector<PredictionRecord> records(sets.size());
  ParallelFor(sets.size(), s.policy.max_concurrent_requests, [&](std::size_t i) {
    const AttributionSet& attrs = sets[i];
    const Interval window = AttributionWindow(attrs);
    PredictionRecord& rec = records[i];
    rec.window = {i, window.start, window.end};
    auto predicted = profile.activities.Find(attrs.predicted_activity);
    if (!predicted) {
      throw UnknownActivity("predicted activity '" + attrs.predicted_activity + "' is not a candidate");
    }
    rec.predicted_activity = *predicted;
    CompletionRequest req;
    req.system = system;
    req.user = builder.BuildExplainerUserPrompt(*predicted, RenderAttributions(attrs, window, catalog),
                                                profile.activities);
    req.model_id = s.model;
    req.temperature = s.temperature;
    req.max_output_tokens = s.max_output_tokens;
    Complete(*gateway, req, profile.activities, ExtractionMode::kExplainer, rec);
    if (rec.status != PredictionStatus::kOk) rec.predicted_activity.clear();
  });
  WriteFileAtomic(a.out, SerializePredictions(records));
  out << "explained " << records.size() << " attribution set(s): " << StatusSummary(records) << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string predictions = "predictions.jsonl";
  std::string truth = "truth.csv";
  std::string profile;
  std::string activities;
  std::string downsample;
  double split = 0.0;
  std::uint64_t seed = 0;
  std::string out = ".";
  CLI::Option* split_opt = nullptr;
};

int Evaluate(const EvaluateArgs& a, std::ostream& out) {
  const ActivitySet activities = ResolveActivities(a.profile, a.activities);
  const auto records = ParsePredictions(ReadFile(a.predictions));
  const auto truth = ParseGroundTruth(ReadFile(a.truth), DatasetFormat::kGenericCsv, activities);

  std::vector<StateWindow> refs;
  std::map<std::size_t, const PredictionRecord*> by_index;
  for (const auto& r : records) {
    if (!by_index.emplace(r.window.index, &r).second) {
      throw SchemaViolation("duplicate prediction for window " + std::to_string(r.window.index));
    }
    refs.push_back({r.window.index, r.window.start, r.window.end, {}});
  }
  LabelingResult labeled = LabelWindows(std::move(refs), truth);
  std::vector<LabeledWindow> selected = std::move(labeled.labeled);
  if (!a.downsample.empty()) {
    const auto names = SplitList(a.downsample);
    for (const auto& n : names) {
      if (!activities.Contains(n)) throw UnknownActivity("cannot downsample unknown class '" + n + "'");
    }
    selected = Downsample(selected, std::set<std::string>(names.begin(), names.end()), a.seed);
  }
  if (a.split_opt != nullptr && a.split_opt->count()) {
    selected = SplitTrainTest(selected, a.split, a.seed).test;
  }

  std::vector<ScoredPair> pairs;
  for (const auto& lw : selected) {
    const PredictionRecord& r = *by_index.at(lw.window.index);
    pairs.push_back({lw.activity, r.predicted_activity, r.status});
  }
  const EvalReport report = Score(pairs, activities);
  const fs::path dir(a.out);
  WriteFileAtomic(Join(dir, "report.json"), report.ToJson());
  WriteFileAtomic(Join(dir, "report.txt"), report.ToText());
  WriteFileAtomic(Join(dir, "confusion.csv"), report.ToConfusionCsv());
  char f1[32];
  std::snprintf(f1, sizeof f1, "%.4f", report.weighted_f1);
  out << "weighted F1 " << f1 << " over " << report.scored << " windows (" << labeled.dropped
      << " without truth, " << report.skipped << " skipped)\n";
  return 0;
}

struct CostArgs {
  std::string unit_cost = "0.0085";
  double hours = 24.0;
};

int Cost(const CostArgs& a, const Settings& s, std::ostream& out) {
  if (!(a.hours > 0.0)) throw InvalidParameters("--hours must be positive");
  const WindowSpec spec = WindowSpec::FromSeconds(s.window_seconds, s.overlap);
  const Money unit = Money::Parse(a.unit_cost);
  const Duration horizon(std::llround(a.hours * 3600.0 * 1000.0));
  const std::int64_t requests = RequestsForHorizon(horizon, spec);
  const Money total = EstimateCost(requests, unit);
  out << requests << " requests, " << total.ToString(2);
  if (a.hours == 24.0) {
    out << "/day\n";
  } else {
    out << " per " << a.hours << " h\n";
  }
  return 0;
}

struct SynthArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out = "synth";
};

int Synth(const SynthArgs& a, std::ostream& out) {
  const SyntheticDataset data = Generate(Scenario::Load(a.scenario), a.seed);
  const fs::path dir(a.out);
  WriteFileAtomic(Join(dir, "events.csv"), SerializeEvents(data.events));
  WriteFileAtomic(Join(dir, "truth.csv"), SerializeGroundTruth(data.truth));
  WriteFileAtomic(Join(dir, "catalog.json"), data.catalog.ToJson());
  WriteFileAtomic(Join(dir, "profile.json"), data.profile.ToJson());
  WriteFileAtomic(Join(dir, "mock_rules.json"), RuleResponder(data.rules).ToJson());
  out << "generated " << data.events.size() << " events and " << data.truth.size()
      << " truth intervals into " << a.out << "\n";
  return 0;
}

struct HeatmapArgs {
  std::string heatmap;
  std::string names;
  double threshold = 0.5;
  std::string predicted;
  std::string profile;
  std::string activities;
  std::string window_start;
  std::string window_end;
  bool inclusive = false;
  bool segments_only = false;
  std::string out = "attributions.json";
};

int Heatmap(const HeatmapArgs& a, std::ostream& out) {
  const HeatmapExplanation hm = ReadHeatmapCsv(ReadFile(a.heatmap));
  json names;
  try {
    names = json::parse(ReadFile(a.names));
  } catch (const json::parse_error& e) {
    throw SchemaViolation(std::string("name map is not valid JSON: ") + e.what());
  }
  if (!names.is_object()) throw SchemaViolation("name map must be an object of feature -> property");
  std::map<std::string, std::string, std::less<>> name_map;
  for (const auto& [k, v] : names.items()) {
    if (!v.is_string()) throw SchemaViolation("name map value for '" + k + "' must be a string");
    name_map[k] = v.get<std::string>();
  }
  HeatmapOptions options;
  options.inclusive = a.inclusive;
  options.all_segments = !a.segments_only;
  AttributionSet attrs = HeatmapToAttributions(hm, a.threshold, a.predicted,
                                               ResolveActivities(a.profile, a.activities), name_map, options);
  if (!a.window_start.empty() || !a.window_end.empty()) {
    if (a.window_start.empty() || a.window_end.empty()) {
      throw UsageError("--window-start and --window-end go together");
    }
    attrs.window = Interval{Timestamp::Parse(a.window_start), Timestamp::Parse(a.window_end)};
  }
  WriteFileAtomic(a.out, SaveAttributionInterchange(attrs));
  out << attrs.features.size() << " important feature(s) written to " << a.out << "\n";
  return 0;
}

std::string_view CategoryName(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kUsage: return "usage";
    case ErrorCategory::kData: return "data";
    case ErrorCategory::kProvider: return "provider";
  }
  return "data";
}

int Fail(std::ostream& err, ErrorCategory category, const std::string& code, const std::string& message) {
  nlohmann::ordered_json line = {{"error", code}, {"category", CategoryName(category)}, {"message", message}};
  err << line.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
  return ExitCodeFor(category);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explainable activity recognition from smart-home sensor streams", "xadl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "xadl 0.1.0");

  CommonFlags common;
  app.add_option("--config", common.config, "JSON config file")->check(CLI::ExistingFile);
  common.model_opt = app.add_option("--model", common.model, "Model identifier");
  common.concurrency_opt = app.add_option("--concurrency", common.concurrency, "Concurrent requests");
  common.retries_opt = app.add_option("--max-retries", common.max_retries, "Retries per request");
  common.timeout_opt = app.add_option("--timeout-seconds", common.timeout_seconds, "HTTP timeout");
  common.base_url_opt = app.add_option("--base-url", common.base_url, "Provider base URL");
  common.templates_opt = app.add_option("--templates", common.templates, "Prompt template directory");
  common.prompt_tokens_opt = app.add_option("--max-prompt-tokens", common.max_prompt_tokens, "Prompt budget");
  app.fallthrough();

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a dataset into events.csv / truth.csv");
  ingest_cmd->add_option("dataset-dir", ingest.dataset_dir, "Dataset directory")->required();
  ingest_cmd->add_option("--format", ingest.format, "uci-adl, marble or generic-csv")
      ->check(CLI::IsMember({"uci-adl", "marble", "generic-csv"}))
      ->capture_default_str();
  ingest_cmd->add_option("--catalog", ingest.catalog, "Sensor catalog JSON")->required();
  ingest_cmd->add_option("--profile", ingest.profile, "Home profile JSON (candidate activities)");
  ingest_cmd->add_option("--activities", ingest.activities, "Comma-separated candidate activities");
  ingest_cmd->add_option("--events", ingest.events_file, "Event log file");
  ingest_cmd->add_option("--truth", ingest.truth_file, "Ground-truth file");
  ingest_cmd->add_option("--exclude", ingest.exclude, "Comma-separated dataset labels to drop");
  ingest_cmd->add_option("--alias", ingest.aliases, "Dataset label mapping FROM=TO");
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->capture_default_str();

  SegmentArgs segment;
  WindowFlags segment_window;
  auto* segment_cmd = app.add_subcommand("segment", "Pair events into states and cut windows");
  segment_cmd->add_option("--in", segment.in, "Directory holding events.csv")->capture_default_str();
  segment_cmd->add_option("--catalog", segment.catalog, "Sensor catalog (default <in>/catalog.json)");
  segment_cmd->add_option("--out", segment.out, "Output directory (default <in>)");
  segment_cmd->add_option("--span-start", segment.span_start, "First window start");
  segment_cmd->add_option("--span-end", segment.span_end, "Last instant windows may cover");
  segment_cmd->add_flag("--close-dangling", segment.close_dangling, "Close open states at stream end");
  segment_window.Attach(segment_cmd);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render windows or attribution sets as prompt JSON");
  render_cmd->add_option("--mode", render.mode)->check(CLI::IsMember({"window", "attributions"}))
      ->capture_default_str();
  render_cmd->add_option("--windows", render.windows, "windows.jsonl");
  render_cmd->add_option("--attributions", render.attributions, "Interchange file or directory");
  render_cmd->add_option("--catalog", render.catalog, "Sensor catalog JSON")->required();
  render_cmd->add_option("--out", render.out, "Output directory")->capture_default_str();

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Zero-shot classification and explanation per window");
  classify_cmd->add_option("--mode", classify.mode)->check(CLI::IsMember({"e2e"}))->capture_default_str();
  classify_cmd->add_option("--windows", classify.windows, "windows.jsonl")->capture_default_str();
  classify_cmd->add_option("--catalog", classify.catalog, "Sensor catalog JSON")->required();
  classify_cmd->add_option("--profile", classify.profile, "Home profile JSON")->required();
  classify_cmd->add_option("--out", classify.out, "Prediction stream")->capture_default_str();
  classify_cmd->add_flag("--include-empty", classify.include_empty, "Send windows without states too");
  classify.backend.Attach(classify_cmd);

  ExplainArgs explain;
  auto* explain_cmd = app.add_subcommand("explain", "Explain attribution sets of an external classifier");
  explain_cmd->add_option("--attributions", explain.attributions, "Interchange file or directory")->required();
  explain_cmd->add_option("--catalog", explain.catalog, "Sensor catalog JSON")->required();
  explain_cmd->add_option("--profile", explain.profile, "Home profile JSON")->required();
  explain_cmd->add_option("--out", explain.out, "Explanation stream")->capture_default_str();
  explain.backend.Attach(explain_cmd);

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--predictions", evaluate.predictions)->capture_default_str();
  evaluate_cmd->add_option("--truth", evaluate.truth, "truth.csv")->capture_default_str();
  evaluate_cmd->add_option("--profile", evaluate.profile, "Home profile JSON (candidate activities)");
  evaluate_cmd->add_option("--activities", evaluate.activities, "Comma-separated candidate activities");
  evaluate_cmd->add_option("--downsample", evaluate.downsample, "Comma-separated classes to balance");
  evaluate.split_opt = evaluate_cmd->add_option("--split", evaluate.split, "Train fraction; test side is scored");
  evaluate_cmd->add_option("--seed", evaluate.seed, "Sampling seed")->capture_default_str();
  evaluate_cmd->add_option("--out", evaluate.out, "Report directory")->capture_default_str();

  CostArgs cost;
  WindowFlags cost_window;
  auto* cost_cmd = app.add_subcommand("cost", "Requests and spend of continuous operation");
  cost_cmd->add_option("--unit-cost", cost.unit_cost, "Cost per request")->capture_default_str();
  cost_cmd->add_option("--hours", cost.hours, "Horizon in hours")->capture_default_str();
  cost_window.Attach(cost_cmd);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--scenario", synth.scenario, "Scenario JSON")->required();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output directory")->capture_default_str();

  HeatmapArgs heatmap;
  auto* heatmap_cmd = app.add_subcommand("heatmap", "Convert a heatmap CSV into an attribution file");
  heatmap_cmd->add_option("--heatmap", heatmap.heatmap, "feature,start,end,max_intensity CSV")->required();
  heatmap_cmd->add_option("--names", heatmap.names, "JSON map of feature -> state property")->required();
  heatmap_cmd->add_option("--threshold", heatmap.threshold)->capture_default_str();
  heatmap_cmd->add_option("--predicted", heatmap.predicted, "Predicted activity")->required();
  heatmap_cmd->add_option("--profile", heatmap.profile, "Home profile JSON (candidate activities)");
  heatmap_cmd->add_option("--activities", heatmap.activities, "Comma-separated candidate activities");
  heatmap_cmd->add_option("--window-start", heatmap.window_start);
  heatmap_cmd->add_option("--window-end", heatmap.window_end);
  heatmap_cmd->add_flag("--inclusive", heatmap.inclusive, "Count intensities equal to the threshold");
  heatmap_cmd->add_flag("--important-segments-only", heatmap.segments_only,
                        "Keep only segments above the threshold");
  heatmap_cmd->add_option("--out", heatmap.out)->capture_default_str();

  std::vector<std::string> argv_store{"xadl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out << "xadl 0.1.0\n";
      return 0;
    } catch (const CLI::ParseError& e) {
      return Fail(err, ErrorCategory::kUsage, "UsageError", e.what());
    }

    if (*ingest_cmd) return Ingest(ingest, out);
    if (*segment_cmd) return Segment(segment, LoadSettings(common, &segment_window), out);
    if (*render_cmd) return Render(render, out);
    if (*classify_cmd) return Classify(classify, LoadSettings(common), out);
    if (*explain_cmd) return Explain(explain, LoadSettings(common), out);
    if (*evaluate_cmd) return Evaluate(evaluate, out);
    if (*cost_cmd) return Cost(cost, LoadSettings(common, &cost_window), out);
    if (*synth_cmd) return Synth(synth, out);
    if (*heatmap_cmd) return Heatmap(heatmap, out);
    return Fail(err, ErrorCategory::kUsage, "UsageError", "no subcommand");
  } catch (const Error& e) {
    return Fail(err, e.category(), e.code(), e.what());
  } catch (const fs::filesystem_error& e) {
    return Fail(err, ErrorCategory::kData, "IoError", e.what());
  } catch (const std::exception& e) {
    return Fail(err, ErrorCategory::kData, "InternalError", e.what());
  }
}

}  // namespace xadl::cli
