#include "llm4tg/harness/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <stdexcept>

#include "llm4tg/errors.hpp"
#include "llm4tg/harness/prompt_assets.hpp"

namespace llm4tg::harness {

namespace {

struct MetricName {
  Level1Metric metric;
  std::string_view name;
  std::string_view attribute;
};

constexpr MetricName kMetricNames[] = {
    {Level1Metric::GlobalInDegree, "global_in_degree", "in_degree"},
    {Level1Metric::GlobalOutDegree, "global_out_degree", "out_degree"},
    {Level1Metric::GlobalInValue, "global_in_value", "in_value"},
    {Level1Metric::GlobalOutValue, "global_out_value", "out_value"},
    {Level1Metric::GlobalDiffDegree, "global_diff_degree", "degree"},
    {Level1Metric::GlobalDiffValue, "global_diff_value", "value"},
    {Level1Metric::NodeInDegree, "node_in_degree", "in_degree"},
    {Level1Metric::NodeOutDegree, "node_out_degree", "out_degree"},
    {Level1Metric::NodeInValue, "node_in_value", "in_value"},
    {Level1Metric::NodeOutValue, "node_out_value", "out_value"},
    {Level1Metric::NodeSpecialInfoA, "node_special_info_a", "time_range"},
    {Level1Metric::NodeSpecialInfoT, "node_special_info_t", "in_nodes/out_nodes"},
};

const MetricName& info(Level1Metric m) {
  for (const MetricName& n : kMetricNames) {
    if (n.metric == m) return n;
  }
  throw std::logic_error("unhandled Level-1 metric");
}

// Ids of the node lines in an LLM4TG text.
std::set<std::uint32_t> defined_ids(std::string_view text) {
  std::set<std::uint32_t> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (auto id = NodeId::parse(line.substr(i, j - i))) {
      ids.insert(id->value);
    }
  }
  return ids;
}

void check_budget(const std::string& prompt, const std::optional<PromptBudget>& budget) {
  if (!budget || budget->encoding == nullptr) return;
  const std::size_t n = budget->encoding->count(prompt);
  if (n > budget->limit) {
    throw BudgetExceeded("prompt needs " + std::to_string(n) + " tokens, budget is " +
                         std::to_string(budget->limit));
  }
}

void append_block(std::string& out, std::string_view title, std::string_view body) {
  out += kBlockMarker;
  out += title;
  out += "]\n";
  out += body;
  if (!body.empty() && body.back() != '\n') out += '\n';
  out += "[end graph]\n";
}

std::string category_line() {
  std::string out = "Categories:";
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += to_string(kAllCategories[i]);
  }
  return out + "\n";
}

}  // namespace

std::string_view to_string(Level1Metric m) { return info(m).name; }

std::optional<Level1Metric> parse_level1_metric(std::string_view name) {
  for (const MetricName& n : kMetricNames) {
    if (n.name == name) return n.metric;
  }
  return std::nullopt;
}

bool is_global(Level1Metric m) { return static_cast<int>(m) < static_cast<int>(Level1Metric::NodeInDegree); }

std::string Level1Question::key() const {
  std::string out(to_string(metric));
  if (node) out += "@" + node->str();
  if (metric == Level1Metric::NodeSpecialInfoT && query) {
    out += "/" + std::string(oracle::to_string(direction)) + "/" + query->str();
  }
  return out;
}

std::string Level1Question::text() const {
  const std::string_view attr = info(metric).attribute;
  switch (metric) {
    case Level1Metric::GlobalInDegree:
    case Level1Metric::GlobalOutDegree:
    case Level1Metric::GlobalInValue:
    case Level1Metric::GlobalOutValue:
      return "Which node has the largest " + std::string(attr) + "?";
    case Level1Metric::GlobalDiffDegree:
      return "Which node has the largest absolute difference between in_degree and out_degree?";
    case Level1Metric::GlobalDiffValue:
      return "Which node has the largest absolute difference between in_value and out_value?";
    case Level1Metric::NodeInDegree:
    case Level1Metric::NodeOutDegree:
    case Level1Metric::NodeInValue:
    case Level1Metric::NodeOutValue:
    case Level1Metric::NodeSpecialInfoA:
      return "What is the " + std::string(attr) + " of " + (node ? node->str() : "?") + "?";
    case Level1Metric::NodeSpecialInfoT: {
      const std::string list = direction == oracle::Direction::In ? "in_nodes" : "out_nodes";
      return "Is " + (query ? query->str() : "?") + " in the " + list + " of transaction " +
             (node ? node->str() : "?") + "?";
    }
  }
  return {};
}

std::vector<Level1Question> global_questions() {
  std::vector<Level1Question> out;
  for (Level1Metric m : kLevel1Metrics) {
    if (is_global(m)) out.push_back(Level1Question{m, std::nullopt, std::nullopt, oracle::Direction::In});
  }
  return out;
}

std::vector<Level1Question> default_battery(const TransactionGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> by_layer(g.max_layer() + 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    by_layer[g.layer_at(i)].push_back(i);
  }
  std::vector<Level1Question> out;
  for (const auto& layer : by_layer) {
    if (layer.empty()) continue;
    const Node& n = g.nodes()[layer[rng() % layer.size()]];
    for (Level1Metric m : {Level1Metric::NodeInDegree, Level1Metric::NodeOutDegree, Level1Metric::NodeInValue,
                           Level1Metric::NodeOutValue}) {
      out.push_back(Level1Question{m, n.id, std::nullopt, oracle::Direction::In});
    }
    if (n.is_address() && n.time_range) {
      out.push_back(Level1Question{Level1Metric::NodeSpecialInfoA, n.id, std::nullopt, oracle::Direction::In});
    }
    if (n.is_transaction()) {
      std::vector<NodeId> neighbours = n.in_nodes;
      neighbours.insert(neighbours.end(), n.out_nodes.begin(), n.out_nodes.end());
      if (!neighbours.empty()) {
        const NodeId q = neighbours[rng() % neighbours.size()];
        const auto dir = (rng() & 1) ? oracle::Direction::Out : oracle::Direction::In;
        out.push_back(Level1Question{Level1Metric::NodeSpecialInfoT, n.id, q, dir});
      }
    }
  }
  return out;
}

std::vector<Level1Question> full_battery(std::span<const Level1Question> node_questions) {
  std::vector<Level1Question> out = global_questions();
  std::set<std::string> keys;
  for (const Level1Question& q : out) keys.insert(q.key());
  for (const Level1Question& q : node_questions) {
    if (keys.insert(q.key()).second) out.push_back(q);
  }
  return out;
}

std::string build_prompt_level1(const io::Llm4tgDocument& doc, std::span<const Level1Question> node_questions,
                                std::optional<PromptBudget> budget) {
  const std::set<std::uint32_t> ids = defined_ids(doc.text);
  for (const Level1Question& q : node_questions) {
    for (const auto& ref : {q.node, q.query}) {
      if (ref && !ids.contains(ref->value)) {
        throw UnknownNodeInQuestion("question " + q.key() + " names " + ref->str() +
                                    ", which the graph does not define");
      }
    }
    if (!is_global(q.metric) && !q.node) {
      throw UnknownNodeInQuestion("question " + q.key() + " names no node");
    }
  }
  std::string out;
  out += assets::level1_system;
  out += "\n";
  append_block(out, "target", doc.text);
  out += "\n";
  out += assets::level1_instructions;
  out += "\nQuestions:\n";
  for (const Level1Question& q : full_battery(node_questions)) {
    out += "[" + q.key() + "] " + q.text() + "\n";
  }
  check_budget(out, budget);
  return out;
}

std::string build_prompt_level2(std::span<const io::Llm4tgDocument> references, const io::Llm4tgDocument& target,
                                std::optional<PromptBudget> budget) {
  if (references.empty()) {
    throw std::invalid_argument("level 2 prompts need at least one reference graph");
  }
  std::string out;
  out += assets::level2_system;
  out += "\nReference graphs:\n";
  for (std::size_t i = 0; i < references.size(); ++i) {
    append_block(out, "reference " + std::to_string(i + 1), references[i].text);
  }
  out += "\nTarget graph:\n";
  append_block(out, "target", target.text);
  out += "\n";
  out += assets::level2_instructions;
  check_budget(out, budget);
  return out;
}

std::string_view to_string(Level3Mode m) { return m == Level3Mode::Raw ? "raw" : "features"; }

std::optional<Level3Mode> parse_level3_mode(std::string_view name) {
  if (name == "raw") return Level3Mode::Raw;
  if (name == "features") return Level3Mode::Features;
  return std::nullopt;
}

std::string build_prompt_level3(std::span<const Level3Reference> references, const Level3Input& target,
                                Level3Mode mode, std::optional<PromptBudget> budget) {
  if (references.empty()) {
    throw std::invalid_argument("level 3 prompts need at least one labelled reference");
  }
  const std::size_t expected = mode == Level3Mode::Raw ? 0 : 1;
  auto check = [&](const Level3Input& in, const std::string& what) {
    if (in.index() != expected) {
      throw MixedMode(what + " is not in " + std::string(to_string(mode)) + " mode");
    }
  };
  for (std::size_t i = 0; i < references.size(); ++i) {
    check(references[i].input, "reference " + std::to_string(i + 1));
  }
  check(target, "target");

  auto body = [&](const Level3Input& in, std::optional<Category> label) {
    if (const auto* doc = std::get_if<io::Llm4tgDocument>(&in)) {
      std::string text = doc->text;
      if (!text.empty() && text.back() != '\n') text += '\n';
      if (label) text += "category: " + std::string(to_string(*label)) + "\n";
      return text;
    }
    return features::feature_prompt_block(std::get<features::FeatureVector>(in), label);
  };

  std::string out;
  out += assets::level3_system;
  out += "\n" + category_line() + "\nLabelled references:\n";
  for (std::size_t i = 0; i < references.size(); ++i) {
    append_block(out, "reference " + std::to_string(i + 1), body(references[i].input, references[i].label));
  }
  out += "\nTarget:\n";
  append_block(out, "target", body(target, std::nullopt));
  out += "\n";
  out += assets::level3_instructions;
  check_budget(out, budget);
  return out;
}

}  // namespace llm4tg::harness
