#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "llm4tg/graph.hpp"
#include "llm4tg/io/ingest.hpp"

namespace llm4tg::testing {

struct RandomGraphOptions {
  std::size_t min_nodes = 10;
  std::size_t max_nodes = 100;
  std::uint32_t hop_bound = 5;
  double extra_edges_per_node = 0.3;
  bool shuffle_ids = true;
  // Small attribute ranges so that argmax ties are common.
  bool tie_prone = false;
  double time_range_probability = 0.9;
  // Chance that an individual attribute is left absent.
  double missing_attribute_probability = 0.0;
  bool edge_values = false;
  bool timestamps = false;
};

/// Random layered bipartite graph rooted at n_0. Every non-root node hangs
/// off a node one layer up, extra edges only join adjacent layers, so the
/// generation layer equals the BFS layer.
TransactionGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options);

/// Dense graph with BASD-like magnitudes: heavy-tailed degrees, 8-decimal
/// amounts, transactions averaging about `edges_per_node` * 2 adjacent
/// addresses.
TransactionGraph basd_like_graph(std::size_t n_nodes, std::uint64_t seed, double edges_per_node = 10.0);

/// n_0 -> n_1 -> n_2: address, transaction, address.
TransactionGraph path3();

/// Root funding one transaction that pays three leaves of increasing
/// importance: n_2 (tiny), n_3 (medium), n_4 (large).
TransactionGraph asymmetric_star();

/// Subgraph around the bc1qah... example address: transaction n_1 (in 77.29740945, out
/// 77.29452845, in-degree 4), transaction n_2 (in-degree 3) and address n_14
/// in layer 2 with in-degree 198 and out-degree 188.
TransactionGraph bc1qah();

/// Subgraph whose transaction n_1 pays 600 addresses.
TransactionGraph bc1q4w();

/// Raw records for a small two-hop neighbourhood of "root".
std::vector<io::RawTxRecord> sample_records();

}  // namespace llm4tg::testing
