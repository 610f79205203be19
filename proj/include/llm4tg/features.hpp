#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "llm4tg/category.hpp"
#include "llm4tg/graph.hpp"
#include "llm4tg/io/ingest.hpp"

namespace llm4tg::features {

/// Ten address-behaviour features of a subgraph.
struct FeatureVector {
  std::uint64_t s2_2 = 0;                // maximum out-degree over all nodes
  double s1_6 = 0.0;                     // population std of in+out degree
  double s1_2 = 0.0;                     // population std of in-degree
  std::optional<double> s3;              // Pearson(out-degree of source, in-degree of target) over edges
  std::optional<double> paia21_1;        // root: min incoming amount / total incoming amount
  std::optional<std::int64_t> ptia41_2;  // root: min gap between consecutive transactions (s)
  std::uint32_t s6 = 0;                  // undirected diameter
  double s5 = 0.0;                       // closeness centrality of the root
  std::optional<double> ci3a32_2;        // root: max in-degree increment per second between incoming txs
  double s7 = 0.0;                       // directed density |E| / (n (n - 1))

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureDescriptor {
  std::string_view label;        // e.g. "S2-2"
  std::string_view description;  // human-readable meaning
};

/// Labels and descriptions in CSV / prompt order.
std::span<const FeatureDescriptor> descriptors();

/// When `records` is non-empty the root-centred amount and timing features
/// are taken from the records involving the root's original address;
/// otherwise from the graph's edge values and transaction timestamps.
/// With `require_temporal`, throws MissingTimestamps when no timestamp
/// source exists.
FeatureVector compute_features(const TransactionGraph& g, std::span<const io::RawTxRecord> records = {},
                               bool require_temporal = false);

/// Undirected diameter by breadth-first search from every node.
std::uint32_t diameter(const TransactionGraph& g);

/// One line per available feature, "<description>: <value>", followed by
/// "category: <label>" when a label is given.
std::string feature_prompt_block(const FeatureVector& v, std::optional<Category> label = std::nullopt);

std::string csv_header();
std::string csv_row(std::string_view graph_id, const FeatureVector& v);

/// Shortest decimal text that round-trips the value.
std::string format_real(double value);

}  // namespace llm4tg::features
