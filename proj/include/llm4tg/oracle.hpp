#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "llm4tg/graph.hpp"

namespace llm4tg::oracle {

enum class GlobalMetric { InDegree, OutDegree, InValue, OutValue, DiffDegree, DiffValue };
enum class NodeMetric { InDegree, OutDegree, InValue, OutValue };
enum class Direction { In, Out };

inline constexpr GlobalMetric kGlobalMetrics[] = {GlobalMetric::InDegree, GlobalMetric::OutDegree,
                                                  GlobalMetric::InValue,  GlobalMetric::OutValue,
                                                  GlobalMetric::DiffDegree, GlobalMetric::DiffValue};
inline constexpr NodeMetric kNodeMetrics[] = {NodeMetric::InDegree, NodeMetric::OutDegree, NodeMetric::InValue,
                                              NodeMetric::OutValue};

std::string_view to_string(GlobalMetric m);  // "in_degree" ... "diff_value"
std::string_view to_string(NodeMetric m);
std::string_view to_string(Direction d);

/// A degree count or a token amount.
using MetricValue = std::variant<std::uint64_t, Amount>;

double as_double(const MetricValue& v);
std::string to_string(const MetricValue& v);

/// Every node attaining the maximum of `metric`, ascending by id. Diff
/// metrics use |in - out|; absent attributes count as zero.
std::vector<NodeId> global_argmax(const TransactionGraph& g, GlobalMetric metric);

MetricValue node_metric(const TransactionGraph& g, NodeId v, NodeMetric metric);

/// time_range of an address node. Throws WrongNodeType for transactions and
/// MissingAttribute when the node has no time_range.
std::uint64_t special_info_address(const TransactionGraph& g, NodeId v);

/// Whether `query` is listed in the transaction's in_nodes (In) or
/// out_nodes (Out). Unknown query ids are simply absent.
bool special_info_transaction(const TransactionGraph& g, NodeId tx, NodeId query, Direction direction);

struct TxMembers {
  std::vector<NodeId> in_nodes;   // sorted
  std::vector<NodeId> out_nodes;  // sorted

  bool operator==(const TxMembers&) const = default;
};

/// Ground truth for every Level-1 metric family of one graph.
struct AnswerKey {
  std::map<GlobalMetric, std::vector<NodeId>> global;
  std::map<std::pair<NodeId, NodeMetric>, MetricValue> node_values;
  std::map<NodeId, std::uint64_t> special_a;
  std::map<NodeId, TxMembers> special_t;

  bool is_argmax(GlobalMetric metric, NodeId id) const;
  /// Throws UnknownNode when `tx` is not a keyed transaction.
  bool contains(NodeId tx, NodeId query, Direction direction) const;

  bool operator==(const AnswerKey&) const = default;
};

AnswerKey answer_key(const TransactionGraph& g);

nlohmann::json to_json(const AnswerKey& key);

}  // namespace llm4tg::oracle
