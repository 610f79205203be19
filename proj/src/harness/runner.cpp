#include "llm4tg/harness/runner.hpp"

#include <future>
#include <iostream>
#include <set>

#include "llm4tg/cetras.hpp"
#include "llm4tg/errors.hpp"
#include "llm4tg/features.hpp"
#include "llm4tg/harness/grading.hpp"
#include "llm4tg/harness/labels.hpp"
#include "llm4tg/harness/metrics.hpp"
#include "llm4tg/oracle.hpp"
#include "llm4tg/tokens/format_report.hpp"
#include "llm4tg/util/atomic_file.hpp"

namespace llm4tg::harness {

namespace {

using nlohmann::json;

constexpr std::string_view kQualityLabels[] = {"high", "average-flawed", "average-irrelevant", "low"};

void require_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ManifestError(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ManifestError("unexpected key '" + k + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get(const json& j, std::string_view key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) throw ManifestError(std::string(where) + " is missing '" + std::string(key) + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ManifestError(std::string(where) + "." + std::string(key) + " has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, std::string_view key, std::string_view where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<DatasetEntry> parse_entries(const json& j, std::string_view where, const std::filesystem::path& base) {
  if (!j.is_array()) throw ManifestError(std::string(where) + " must be an array");
  std::vector<DatasetEntry> out;
  std::set<std::string> ids;
  for (const json& e : j) {
    const std::string w = std::string(where) + " entry";
    require_keys(e, w, {"id", "path", "format", "root_address", "label"});
    DatasetEntry d;
    d.id = get<std::string>(e, "id", w);
    if (d.id.empty() || !ids.insert(d.id).second) {
      throw ManifestError(std::string(where) + " has an empty or duplicate id '" + d.id + "'");
    }
    d.path = resolve(base, get<std::string>(e, "path", w));
    if (e.contains("format")) {
      const auto name = get<std::string>(e, "format", w);
      d.format = io::parse_graph_format(name);
      if (!d.format) throw ManifestError("unknown format '" + name + "' for " + d.id);
    }
    d.root_address = get_or<std::string>(e, "root_address", w, "");
    if (e.contains("label")) {
      const auto name = get<std::string>(e, "label", w);
      d.label = parse_category(name);
      if (!d.label) throw ManifestError("unknown category '" + name + "' for " + d.id);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

TransactionGraph prepare_graph(const Manifest& m, const DatasetEntry& e) {
  io::LoadOptions opts;
  opts.root_address = e.root_address;
  TransactionGraph g = io::load_graph(e.path, e.format, opts).with_label(e.label);
  if (m.sample && g.size() > 1) {
    g = cetras::sample(g, {m.sample->n_target, entry_seed(m.seed, e.id), m.sample->beta});
  }
  return g;
}

Level3Input level3_input(const Manifest& m, const TransactionGraph& g) {
  if (m.mode == Level3Mode::Raw) return io::serialize_llm4tg(g);
  return features::compute_features(g);
}

struct Outcome {
  std::optional<EvalRecord> record;
  std::string error;
};

std::map<std::string, std::string> load_annotations(const Manifest& m) {
  std::map<std::string, std::string> out;
  if (!m.annotations || !std::filesystem::exists(*m.annotations)) return out;
  json j;
  try {
    j = json::parse(util::read_file(*m.annotations));
  } catch (const json::exception& e) {
    throw ManifestError("annotation file " + m.annotations->string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ManifestError("annotation file must map graph ids to quality labels");
  for (const auto& [id, v] : j.items()) {
    if (!v.is_string() ||
        std::find(std::begin(kQualityLabels), std::end(kQualityLabels), v.get<std::string>()) ==
            std::end(kQualityLabels)) {
      throw ManifestError("annotation for " + id + " must be one of high, average-flawed, average-irrelevant, low");
    }
    out[id] = v.get<std::string>();
  }
  return out;
}

}  // namespace

std::uint64_t entry_seed(std::uint64_t seed, std::string_view graph_id) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : graph_id) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix(seed ^ mix(h));
}

Manifest parse_manifest(const json& j, const std::filesystem::path& base_dir) {
  require_keys(j, "manifest",
               {"level", "mode", "seed", "endpoint", "dataset", "references", "budget_model", "sample", "output",
                "summary", "annotations"});
  Manifest m;
  m.level = get<int>(j, "level", "manifest");
  if (m.level < 1 || m.level > 3) throw ManifestError("level must be 1, 2 or 3");
  if (!j.contains("seed") || !j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) {
    throw ManifestError("manifest needs a non-negative integer 'seed'");
  }
  m.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("mode")) {
    const auto name = get<std::string>(j, "mode", "manifest");
    const auto mode = parse_level3_mode(name);
    if (!mode) throw ManifestError("mode must be raw or features, not '" + name + "'");
    m.mode = *mode;
  }

  const json& ep = j.contains("endpoint") ? j["endpoint"] : throw ManifestError("manifest is missing 'endpoint'");
  if (ep.contains("api_key")) {
    throw ManifestError("credentials may not be stored in the manifest; name an environment variable in api_key_env");
  }
  m.endpoint_type = get<std::string>(ep, "type", "endpoint");
  if (m.endpoint_type == "http") {
    require_keys(ep, "endpoint",
                 {"type", "base_url", "model", "api_key_env", "timeout_ms", "max_retries", "parallelism",
                  "rate_per_minute", "initial_backoff_ms", "temperature"});
    m.endpoint.model = get<std::string>(ep, "model", "endpoint");
    m.endpoint.base_url = get_or<std::string>(ep, "base_url", "endpoint", m.endpoint.base_url);
    m.endpoint.api_key_env = get_or<std::string>(ep, "api_key_env", "endpoint", m.endpoint.api_key_env);
    m.endpoint.timeout = std::chrono::milliseconds(get_or<long>(ep, "timeout_ms", "endpoint", 120'000));
    m.endpoint.max_retries = get_or<int>(ep, "max_retries", "endpoint", m.endpoint.max_retries);
    m.endpoint.parallelism = get_or<int>(ep, "parallelism", "endpoint", m.endpoint.parallelism);
    m.endpoint.rate_per_minute = get_or<int>(ep, "rate_per_minute", "endpoint", 0);
    m.endpoint.initial_backoff =
        std::chrono::milliseconds(get_or<long>(ep, "initial_backoff_ms", "endpoint", 1'000));
    m.endpoint.temperature = get_or<double>(ep, "temperature", "endpoint", 0.0);
    if (m.endpoint.timeout.count() <= 0) throw ManifestError("endpoint.timeout_ms must be positive");
    if (m.endpoint.parallelism < 1) throw ManifestError("endpoint.parallelism must be at least 1");
    if (m.endpoint.max_retries < 0) throw ManifestError("endpoint.max_retries must be non-negative");
  } else if (m.endpoint_type == "mock") {
    require_keys(ep, "endpoint", {"type", "model", "replies", "default_reply", "parallelism"});
    m.endpoint.model = get_or<std::string>(ep, "model", "endpoint", "mock");
    m.endpoint.parallelism = get_or<int>(ep, "parallelism", "endpoint", 1);
    if (m.endpoint.parallelism < 1) throw ManifestError("endpoint.parallelism must be at least 1");
    m.mock_replies = get_or<std::map<std::string, std::string>>(ep, "replies", "endpoint", {});
    m.mock_default = get_or<std::string>(ep, "default_reply", "endpoint", "");
  } else {
    throw ManifestError("endpoint.type must be http or mock, not '" + m.endpoint_type + "'");
  }

  if (!j.contains("dataset")) throw ManifestError("manifest is missing 'dataset'");
  m.dataset = parse_entries(j["dataset"], "dataset", base_dir);
  if (m.dataset.empty()) throw ManifestError("dataset is empty");
  if (j.contains("references")) m.references = parse_entries(j["references"], "references", base_dir);
  if (m.level >= 2 && m.references.empty()) {
    throw ManifestError("levels 2 and 3 need at least one reference graph");
  }
  if (m.level == 3) {
    for (const auto* list : {&m.dataset, &m.references}) {
      for (const DatasetEntry& e : *list) {
        if (!e.label) throw ManifestError("level 3 entry " + e.id + " needs a label");
      }
    }
  }

  if (j.contains("budget_model")) {
    m.budget_model = get<std::string>(j, "budget_model", "manifest");
    try {
      tokens::budget_for(*m.budget_model);
    } catch (const UnknownModel& e) {
      throw ManifestError(e.what());
    }
  }
  if (j.contains("sample")) {
    const json& s = j["sample"];
    require_keys(s, "sample", {"n_target", "beta"});
    SamplingSettings settings;
    settings.n_target = get<std::size_t>(s, "n_target", "sample");
    settings.beta = get_or<double>(s, "beta", "sample", settings.beta);
    if (settings.n_target < 1 || settings.beta < 0) throw ManifestError("sample needs n_target >= 1 and beta >= 0");
    m.sample = settings;
  }
  m.output = resolve(base_dir, get_or<std::string>(j, "output", "manifest", "records.jsonl"));
  m.summary = resolve(base_dir, get_or<std::string>(j, "summary", "manifest", "summary.csv"));
  if (j.contains("annotations")) m.annotations = resolve(base_dir, get<std::string>(j, "annotations", "manifest"));
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const Error& e) {
    throw ManifestError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ManifestError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

std::unique_ptr<ModelClient> make_client(const Manifest& m) {
  if (m.endpoint_type == "mock") {
    return std::make_unique<ScriptedModelClient>(m.mock_replies, m.mock_default, m.endpoint.model);
  }
  return std::make_unique<HttpModelClient>(m.endpoint);
}

RunResult run_evaluation(const Manifest& m, ModelClient& client, const RunOptions& options) {
  RunResult result;
  std::set<std::string> recorded;
  for (const EvalRecord& r : load_records(m.output)) {
    if (r.level == m.level) recorded.insert(r.graph_id);
  }
  std::vector<const DatasetEntry*> pending;
  for (const DatasetEntry& e : m.dataset) {
    if (recorded.contains(e.id)) {
      ++result.skipped;
    } else {
      pending.push_back(&e);
    }
  }

  std::optional<PromptBudget> budget;
  std::shared_ptr<const tokens::Encoding> encoding;
  if (m.budget_model) {
    encoding = tokens::Encoding::load();
    budget = PromptBudget{encoding.get(), tokens::budget_for(*m.budget_model).limit};
  }

  std::vector<io::Llm4tgDocument> level2_refs;
  std::vector<Level3Reference> level3_refs;
  for (const DatasetEntry& e : m.references) {
    const TransactionGraph g = prepare_graph(m, e);
    if (m.level == 2) level2_refs.push_back(io::serialize_llm4tg(g));
    if (m.level == 3) level3_refs.push_back({level3_input(m, g), *e.label});
  }

  auto evaluate = [&](const DatasetEntry& e) -> Outcome {
    try {
      const TransactionGraph g = prepare_graph(m, e);
      EvalRecord r;
      r.level = m.level;
      r.graph_id = e.id;
      r.model = client.model_name();
      json grade;
      if (m.level == 1) {
        const auto questions = default_battery(g, entry_seed(m.seed, e.id));
        r.prompt = build_prompt_level1(io::serialize_llm4tg(g), questions, budget);
        r.response = query(client, {e.id, r.prompt});
        const Level1Grade lg = grade_level1(r.response, questions, oracle::answer_key(g));
        r.parsed = json::object();
        for (const QuestionGrade& q : lg.questions) {
          if (q.answer) r.parsed[q.key] = *q.answer;
        }
        grade = to_json(lg);
      } else if (m.level == 2) {
        r.prompt = build_prompt_level2(level2_refs, io::serialize_llm4tg(g), budget);
        r.response = query(client, {e.id, r.prompt});
        r.parsed = json::object();
        grade = {{"quality", nullptr}};
      } else {
        r.prompt = build_prompt_level3(level3_refs, level3_input(m, g), m.mode, budget);
        r.response = query(client, {e.id, r.prompt});
        std::vector<Category> ranked;
        r.parsed = json::object();
        try {
          ranked = parse_ranked_labels(r.response);
        } catch (const NoParsableLabels& ex) {
          std::cerr << "llm4tg: " << e.id << ": " << ex.what() << "; counted as a wrong prediction\n";
          r.parsed["error"] = ex.what();
        }
        json names = json::array();
        for (Category c : ranked) names.push_back(std::string(to_string(c)));
        r.parsed["ranked"] = names;
        const bool top1 = !ranked.empty() && ranked.front() == *e.label;
        const bool top3 = std::find(ranked.begin(), ranked.end(), *e.label) != ranked.end();
        grade = {{"truth", std::string(to_string(*e.label))}, {"top1", top1}, {"top3", top3}};
      }
      r.grade = grade;
      r.timestamp = utc_timestamp();
      return {std::move(r), {}};
    } catch (const std::exception& ex) {
      return {std::nullopt, ex.what()};
    }
  };

  RecordWriter writer(m.output);
  const std::size_t limit = options.max_new_records.value_or(pending.size());
  const std::size_t window = static_cast<std::size_t>(std::max(m.endpoint.parallelism, 1));
  std::size_t next = 0;
  while (next < pending.size() && result.written < limit) {
    std::vector<std::future<Outcome>> batch;
    const std::size_t want = std::min(window, limit - result.written);
    for (std::size_t k = 0; k < want && next < pending.size(); ++k, ++next) {
      batch.push_back(std::async(std::launch::async, evaluate, std::cref(*pending[next])));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      Outcome o = batch[k].get();
      const DatasetEntry& e = *pending[next - batch.size() + k];
      if (!o.record) {
        std::cerr << "llm4tg: " << e.id << ": " << o.error << "\n";
        ++result.failed;
        continue;
      }
      writer.write(*o.record);
      ++result.written;
    }
  }

  util::write_file_atomic(m.summary, summarize(m, load_records(m.output)));
  return result;
}

std::string summarize(const Manifest& m, const std::vector<EvalRecord>& records) {
  std::vector<const EvalRecord*> mine;
  std::set<std::string> seen;
  for (const EvalRecord& r : records) {
    if (r.level == m.level && seen.insert(r.graph_id).second) mine.push_back(&r);
  }
  std::string out;
  if (m.level == 1) {
    out = "metric,asked,correct,accuracy\n";
    std::array<std::size_t, 12> asked{}, correct{};
    std::size_t structured = 0;
    for (const EvalRecord* r : mine) {
      if (!r->grade) continue;
      structured += r->grade->value("struct_correctness", false) ? 1 : 0;
      for (Level1Metric metric : kLevel1Metrics) {
        const auto& f = (*r->grade)["families"][std::string(to_string(metric))];
        asked[static_cast<std::size_t>(metric)] += f.value("asked", std::size_t{0});
        correct[static_cast<std::size_t>(metric)] += f.value("correct", std::size_t{0});
      }
    }
    auto row = [&](std::string_view name, std::size_t a, std::size_t c) {
      out += std::string(name) + "," + std::to_string(a) + "," + std::to_string(c) + "," +
             features::format_real(a == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(a)) + "\n";
    };
    row("struct_correctness", mine.size(), structured);
    for (Level1Metric metric : kLevel1Metrics) {
      const auto i = static_cast<std::size_t>(metric);
      row(to_string(metric), asked[i], correct[i]);
    }
  } else if (m.level == 2) {
    const auto annotations = load_annotations(m);
    std::map<std::string, std::size_t> counts;
    std::size_t rated = 0;
    for (const EvalRecord* r : mine) {
      if (auto it = annotations.find(r->graph_id); it != annotations.end()) {
        ++counts[it->second];
        ++rated;
      }
    }
    out = "quality,count,fraction\n";
    for (std::string_view q : kQualityLabels) {
      const std::size_t c = counts[std::string(q)];
      out += std::string(q) + "," + std::to_string(c) + "," +
             features::format_real(rated == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(rated)) + "\n";
    }
    out += "unrated," + std::to_string(mine.size() - rated) + ",\n";
  } else {
    std::vector<Category> truths;
    std::vector<std::vector<Category>> predictions;
    for (const EvalRecord* r : mine) {
      if (!r->grade) continue;
      const auto truth = parse_category(r->grade->value("truth", std::string()));
      if (!truth) continue;
      std::vector<Category> ranked;
      for (const auto& name : r->parsed.value("ranked", json::array())) {
        if (auto c = parse_category(name.get<std::string>())) ranked.push_back(*c);
      }
      truths.push_back(*truth);
      predictions.push_back(std::move(ranked));
    }
    out = "metric,value\n";
    if (truths.empty()) return out;
    const ClassificationMetrics cm = classification_metrics(truths, predictions);
    auto row = [&](std::string_view name, double v) { out += std::string(name) + "," + features::format_real(v) + "\n"; };
    row("accuracy", cm.accuracy);
    row("top3_accuracy", cm.top3_accuracy);
    row("macro_precision", cm.macro_precision);
    row("macro_recall", cm.macro_recall);
    row("macro_f1", cm.macro_f1);
    for (const auto& [c, s] : cm.per_category) {
      const std::string name(to_string(c));
      row("precision:" + name, s.precision);
      row("recall:" + name, s.recall);
      row("f1:" + name, s.f1);
      out += "support:" + name + "," + std::to_string(s.support) + "\n";
    }
  }
  return out;
}

}  // namespace llm4tg::harness
