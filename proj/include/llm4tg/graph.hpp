#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "llm4tg/amount.hpp"
#include "llm4tg/category.hpp"

namespace llm4tg {

/// Local node identifier `n_<k>`; `n_0` is always the root address.
struct NodeId {
  std::uint32_t value = 0;

  std::string str() const { return "n_" + std::to_string(value); }
  static std::optional<NodeId> parse(std::string_view text);

  constexpr auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kRootId{0};

enum class NodeType : std::uint8_t { Address, Transaction };

std::string_view to_string(NodeType t);

/// One address or transaction node. Numeric attributes are frozen copies of
/// the source data and may be absent when the source omitted them.
struct Node {
  NodeId id;
  NodeType type = NodeType::Address;
  std::optional<std::string> original_id;

  std::optional<std::uint64_t> in_degree;
  std::optional<std::uint64_t> out_degree;
  std::optional<Amount> in_value;
  std::optional<Amount> out_value;

  std::optional<std::uint64_t> time_range;  // address nodes only
  std::optional<std::int64_t> timestamp;    // transaction nodes only

  // Transaction adjacency, derived from the edge list by build_graph:
  // in_nodes fund this transaction, out_nodes receive from it.
  std::vector<NodeId> in_nodes;
  std::vector<NodeId> out_nodes;

  bool is_address() const { return type == NodeType::Address; }
  bool is_transaction() const { return type == NodeType::Transaction; }

  std::uint64_t in_degree_or0() const { return in_degree.value_or(0); }
  std::uint64_t out_degree_or0() const { return out_degree.value_or(0); }
  Amount in_value_or0() const { return in_value.value_or(Amount{}); }
  Amount out_value_or0() const { return out_value.value_or(Amount{}); }

  bool operator==(const Node&) const = default;
};

/// Directed token flow: address -> transaction (funding) or
/// transaction -> address (payment).
struct Edge {
  NodeId from;
  NodeId to;
  std::optional<Amount> value;

  bool operator==(const Edge&) const = default;
};

/// Rooted, layered, bipartite transaction subgraph. Immutable once built.
class TransactionGraph {
 public:
  static constexpr std::uint32_t kDefaultHopBound = 5;

  NodeId root() const { return nodes_[root_index_].id; }
  std::uint32_t hop_bound() const { return hop_bound_; }
  const std::optional<Category>& label() const { return label_; }

  std::size_t size() const { return nodes_.size(); }
  /// Nodes sorted by ascending id.
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }

  bool contains(NodeId id) const { return index_.contains(id.value); }
  std::size_t index_of(NodeId id) const;
  const Node& node(NodeId id) const { return nodes_[index_of(id)]; }

  /// Undirected BFS distance from the root.
  std::uint32_t layer_of(NodeId id) const { return layers_[index_of(id)]; }
  std::uint32_t layer_at(std::size_t index) const { return layers_[index]; }
  std::uint32_t max_layer() const;

  /// Undirected neighbours of the node at `index`, as node indices in
  /// ascending id order.
  std::span<const std::uint32_t> neighbors(std::size_t index) const {
    return {adjacency_.data() + offsets_[index], adjacency_.data() + offsets_[index + 1]};
  }

  /// One minimum-length undirected path root..id; ties go to the smaller id.
  std::vector<NodeId> shortest_path(NodeId id) const;

  TransactionGraph with_label(std::optional<Category> label) const;

 private:
  friend TransactionGraph build_graph(std::vector<Node>, std::vector<Edge>, NodeId, std::uint32_t,
                                      std::optional<Category>);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint32_t, std::uint32_t> index_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
  std::vector<std::uint32_t> layers_;
  std::vector<std::uint32_t> parent_;
  std::uint32_t root_index_ = 0;
  std::uint32_t hop_bound_ = kDefaultHopBound;
  std::optional<Category> label_;
};

/// Validates and indexes a graph. Transaction in_nodes/out_nodes are
/// rebuilt from `edges` in edge order; any lists on the input nodes are
/// ignored.
TransactionGraph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, NodeId root = kRootId,
                             std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound,
                             std::optional<Category> label = std::nullopt);

std::uint32_t layer_of(const TransactionGraph& g, NodeId v);
std::vector<NodeId> shortest_path(const TransactionGraph& g, NodeId v);

/// Equality over the information LLM4TG retains: node ids, types, degree,
/// value and time_range attributes, transaction adjacency lists and the set
/// of (from, to) edges. Edge values, timestamps, original ids and labels
/// are ignored.
bool same_retained_content(const TransactionGraph& a, const TransactionGraph& b);

}  // namespace llm4tg

template <>
struct std::hash<llm4tg::NodeId> {
  std::size_t operator()(llm4tg::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
