#include "llm4tg/cetras.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "llm4tg/errors.hpp"

namespace llm4tg::cetras {

double node_importance(double a_in, double a_out, std::uint64_t d_in, std::uint64_t d_out, std::uint32_t l_s,
                       double beta) {
  const double value_term = std::log(a_in + a_out + 1.0);
  const double degree_term = std::log(static_cast<double>(d_in) + static_cast<double>(d_out) + 1.0);
  return (value_term + beta * degree_term) / (static_cast<double>(l_s) + 1.0);
}

namespace {

std::size_t position(const std::vector<NodeId>& ids, NodeId id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) {
    throw UnknownNode("node " + id.str() + " is not in the importance table");
  }
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

double ImportanceTable::score(NodeId id) const { return scores[position(ids, id)]; }

double ImportanceTable::probability(NodeId id) const { return probabilities[position(ids, id)]; }

ImportanceTable importance_table(const TransactionGraph& g, double beta) {
  if (g.size() < 2) {
    throw SingleNodeGraph("graph has no node besides the root");
  }
  ImportanceTable table;
  table.root = g.root();
  table.beta = beta;
  table.ids.reserve(g.size());
  table.scores.reserve(g.size());
  table.probabilities.assign(g.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Node& n = g.nodes()[i];
    const double score = node_importance(n.in_value_or0().to_coins(), n.out_value_or0().to_coins(),
                                         n.in_degree_or0(), n.out_degree_or0(), g.layer_at(i), beta);
    table.ids.push_back(n.id);
    table.scores.push_back(score);
    if (n.id == table.root) {
      continue;
    }
    if (!(score > 0.0) || !std::isfinite(score)) {
      throw ZeroImportance("node " + n.id.str() + " has importance " + std::to_string(score) +
                           "; it needs a positive degree or value");
    }
    table.probabilities[i] = 1.0 / score;
    total += table.probabilities[i];
  }
  for (double& p : table.probabilities) {
    p /= total;
  }
  return table;
}

std::vector<NodeId> draw_distinct(const ImportanceTable& table, std::size_t goal, std::uint64_t seed) {
  std::vector<double> cdf(table.probabilities.size());
  std::partial_sum(table.probabilities.begin(), table.probabilities.end(), cdf.begin());
  std::size_t candidates = 0;
  for (double p : table.probabilities) {
    candidates += p > 0.0;
  }
  goal = std::min(goal, candidates);

  std::mt19937_64 rng(seed);
  std::vector<char> taken(cdf.size(), 0);
  std::vector<NodeId> picked;
  picked.reserve(goal);
  const double total = cdf.empty() ? 0.0 : cdf.back();
  while (picked.size() < goal) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u * total);
    std::size_t idx = std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    // Skip zero-probability slots that share the boundary value.
    while (table.probabilities[idx] <= 0.0 && idx + 1 < cdf.size()) {
      ++idx;
    }
    if (!taken[idx]) {
      taken[idx] = 1;
      picked.push_back(table.ids[idx]);
    }
  }
  return picked;
}

TransactionGraph sample(const TransactionGraph& g, const SampleConfig& cfg) {
  if (cfg.n_target < 1) {
    throw std::invalid_argument("n_target must be at least 1");
  }
  if (!(cfg.beta >= 0.0)) {
    throw std::invalid_argument("beta must be non-negative");
  }
  const ImportanceTable table = importance_table(g, cfg.beta);
  const std::size_t goal = std::min(cfg.n_target, g.size() - 1);

  std::vector<char> keep(g.size(), 0);
  keep[g.index_of(g.root())] = 1;
  if (goal == g.size() - 1) {
    // Every non-root node is selected; no draw can change the outcome.
    std::fill(keep.begin(), keep.end(), 1);
  } else {
    for (NodeId picked : draw_distinct(table, goal, cfg.seed)) {
      for (NodeId on_path : g.shortest_path(picked)) {
        keep[g.index_of(on_path)] = 1;
      }
    }
  }

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (keep[i]) {
      nodes.push_back(g.nodes()[i]);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (keep[g.index_of(e.from)] && keep[g.index_of(e.to)]) {
      edges.push_back(e);
    }
  }
  return build_graph(std::move(nodes), std::move(edges), g.root(), g.hop_bound(), g.label());
}

}  // namespace llm4tg::cetras
