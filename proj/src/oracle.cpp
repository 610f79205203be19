#include "llm4tg/oracle.hpp"

#include <algorithm>

#include "llm4tg/errors.hpp"

namespace llm4tg::oracle {

std::string_view to_string(GlobalMetric m) {
  switch (m) {
    case GlobalMetric::InDegree: return "in_degree";
    case GlobalMetric::OutDegree: return "out_degree";
    case GlobalMetric::InValue: return "in_value";
    case GlobalMetric::OutValue: return "out_value";
    case GlobalMetric::DiffDegree: return "diff_degree";
    case GlobalMetric::DiffValue: return "diff_value";
  }
  return "unknown";
}

std::string_view to_string(NodeMetric m) {
  switch (m) {
    case NodeMetric::InDegree: return "in_degree";
    case NodeMetric::OutDegree: return "out_degree";
    case NodeMetric::InValue: return "in_value";
    case NodeMetric::OutValue: return "out_value";
  }
  return "unknown";
}

std::string_view to_string(Direction d) { return d == Direction::In ? "in" : "out"; }

double as_double(const MetricValue& v) {
  if (const auto* count = std::get_if<std::uint64_t>(&v)) {
    return static_cast<double>(*count);
  }
  return std::get<Amount>(v).to_coins();
}

std::string to_string(const MetricValue& v) {
  if (const auto* count = std::get_if<std::uint64_t>(&v)) {
    return std::to_string(*count);
  }
  return std::get<Amount>(v).to_string();
}

namespace {

// Values compared as integers: degrees directly, amounts in 1e-8 units.
std::uint64_t metric_units(const Node& n, GlobalMetric m) {
  auto absdiff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
  const auto in_units = static_cast<std::uint64_t>(n.in_value_or0().units());
  const auto out_units = static_cast<std::uint64_t>(n.out_value_or0().units());
  switch (m) {
    case GlobalMetric::InDegree: return n.in_degree_or0();
    case GlobalMetric::OutDegree: return n.out_degree_or0();
    case GlobalMetric::InValue: return in_units;
    case GlobalMetric::OutValue: return out_units;
    case GlobalMetric::DiffDegree: return absdiff(n.in_degree_or0(), n.out_degree_or0());
    case GlobalMetric::DiffValue: return absdiff(in_units, out_units);
  }
  return 0;
}

const Node& transaction(const TransactionGraph& g, NodeId tx) {
  const Node& n = g.node(tx);
  if (!n.is_transaction()) {
    throw WrongNodeType("node " + tx.str() + " is not a transaction");
  }
  return n;
}

std::vector<NodeId> sorted(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::vector<NodeId> global_argmax(const TransactionGraph& g, GlobalMetric metric) {
  std::vector<NodeId> best;
  std::uint64_t best_value = 0;
  for (const Node& n : g.nodes()) {
    const std::uint64_t v = metric_units(n, metric);
    if (best.empty() || v > best_value) {
      best.assign(1, n.id);
      best_value = v;
    } else if (v == best_value) {
      best.push_back(n.id);
    }
  }
  return best;
}

MetricValue node_metric(const TransactionGraph& g, NodeId v, NodeMetric metric) {
  const Node& n = g.node(v);
  switch (metric) {
    case NodeMetric::InDegree: return n.in_degree_or0();
    case NodeMetric::OutDegree: return n.out_degree_or0();
    case NodeMetric::InValue: return n.in_value_or0();
    case NodeMetric::OutValue: return n.out_value_or0();
  }
  return std::uint64_t{0};
}

std::uint64_t special_info_address(const TransactionGraph& g, NodeId v) {
  const Node& n = g.node(v);
  if (!n.is_address()) {
    throw WrongNodeType("node " + v.str() + " is not an address");
  }
  if (!n.time_range) {
    throw MissingAttribute("address " + v.str() + " has no time_range");
  }
  return *n.time_range;
}

bool special_info_transaction(const TransactionGraph& g, NodeId tx, NodeId query, Direction direction) {
  const Node& n = transaction(g, tx);
  const auto& list = direction == Direction::In ? n.in_nodes : n.out_nodes;
  return std::find(list.begin(), list.end(), query) != list.end();
}

bool AnswerKey::is_argmax(GlobalMetric metric, NodeId id) const {
  auto it = global.find(metric);
  return it != global.end() && std::binary_search(it->second.begin(), it->second.end(), id);
}

bool AnswerKey::contains(NodeId tx, NodeId query, Direction direction) const {
  auto it = special_t.find(tx);
  if (it == special_t.end()) {
    throw UnknownNode("no transaction " + tx.str() + " in the answer key");
  }
  const auto& list = direction == Direction::In ? it->second.in_nodes : it->second.out_nodes;
  return std::binary_search(list.begin(), list.end(), query);
}

AnswerKey answer_key(const TransactionGraph& g) {
  AnswerKey key;
  for (GlobalMetric m : kGlobalMetrics) {
    key.global[m] = global_argmax(g, m);
  }
  for (const Node& n : g.nodes()) {
    for (NodeMetric m : kNodeMetrics) {
      key.node_values.emplace(std::pair{n.id, m}, node_metric(g, n.id, m));
    }
    if (n.is_address() && n.time_range) {
      key.special_a[n.id] = *n.time_range;
    }
    if (n.is_transaction()) {
      key.special_t[n.id] = TxMembers{sorted(n.in_nodes), sorted(n.out_nodes)};
    }
  }
  return key;
}

nlohmann::json to_json(const AnswerKey& key) {
  using nlohmann::json;
  auto ids = [](const std::vector<NodeId>& list) {
    json out = json::array();
    for (NodeId id : list) out.push_back(id.str());
    return out;
  };
  json out;
  json global = json::object();
  for (const auto& [metric, winners] : key.global) {
    global["global_" + std::string(to_string(metric))] = ids(winners);
  }
  out["global"] = std::move(global);
  json nodes = json::object();
  for (const auto& [slot, value] : key.node_values) {
    json& entry = nodes[slot.first.str()];
    if (std::holds_alternative<std::uint64_t>(value)) {
      entry[std::string(to_string(slot.second))] = std::get<std::uint64_t>(value);
    } else {
      // amounts keep their exact decimal text
      entry[std::string(to_string(slot.second))] = std::get<Amount>(value).to_string();
    }
  }
  out["nodes"] = std::move(nodes);
  json special_a = json::object();
  for (const auto& [id, range] : key.special_a) special_a[id.str()] = range;
  out["special_info_a"] = std::move(special_a);
  json special_t = json::object();
  for (const auto& [id, members] : key.special_t) {
    special_t[id.str()] = {{"in_nodes", ids(members.in_nodes)}, {"out_nodes", ids(members.out_nodes)}};
  }
  out["special_info_t"] = std::move(special_t);
  return out;
}

}  // namespace llm4tg::oracle
