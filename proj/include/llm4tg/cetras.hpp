#pragma once

#include <cstdint>
#include <vector>

#include "llm4tg/graph.hpp"

namespace llm4tg::cetras {

inline constexpr double kDefaultBeta = 2.0;

/// Importance of a node:
///   (ln(a_in + a_out + 1) + beta * ln(d_in + d_out + 1)) / (l_s + 1)
/// with amounts in whole coins and l_s the hop distance to the root.
double node_importance(double a_in, double a_out, std::uint64_t d_in, std::uint64_t d_out, std::uint32_t l_s,
                       double beta);

/// Per-node importance and sampling probability, aligned with
/// TransactionGraph::nodes(). The root carries probability 0; every other
/// node is weighted by 1 / importance and the weights sum to 1.
struct ImportanceTable {
  NodeId root;
  double beta = kDefaultBeta;
  std::vector<NodeId> ids;
  std::vector<double> scores;
  std::vector<double> probabilities;

  double score(NodeId id) const;
  double probability(NodeId id) const;
};

/// Throws SingleNodeGraph when the root is the only node and ZeroImportance
/// when a non-root node scores zero (no degree or value information).
ImportanceTable importance_table(const TransactionGraph& g, double beta = kDefaultBeta);

struct SampleConfig {
  std::size_t n_target = 1;
  std::uint64_t seed = 0;
  double beta = kDefaultBeta;
};

/// Draws ids with replacement from the table's distribution (std::mt19937_64
/// seeded with `seed`, inverse-CDF on 53-bit uniforms) until `goal` distinct
/// non-root ids are collected. Returned in draw order.
std::vector<NodeId> draw_distinct(const ImportanceTable& table, std::size_t goal, std::uint64_t seed);

/// Condenses `g`: selects min(n_target, |V|-1) distinct non-root nodes by
/// inverse-importance sampling, then keeps every node on each selected
/// node's shortest path from the root. The result is the subgraph induced
/// by the kept nodes; node attributes are copied unchanged.
TransactionGraph sample(const TransactionGraph& g, const SampleConfig& cfg);

}  // namespace llm4tg::cetras
