#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llm4tg/amount.hpp"
#include "llm4tg/graph.hpp"

namespace llm4tg::io {

struct TxLeg {
  std::string address;
  Amount amount;

  bool operator==(const TxLeg&) const = default;
};

/// One on-chain transaction as exported from a node or explorer.
struct RawTxRecord {
  std::string tx_id;
  std::int64_t timestamp = 0;
  std::vector<TxLeg> inputs;
  std::vector<TxLeg> outputs;

  bool operator==(const RawTxRecord&) const = default;
};

inline constexpr std::size_t kDefaultNodeCap = 3000;

/// Reads the flat CSV interchange: a header naming the columns
/// tx_id, timestamp, side (in|out), address, amount; one row per leg.
/// Rows sharing a tx_id form one record, in order of first appearance.
std::vector<RawTxRecord> read_raw_records(std::istream& in);
std::vector<RawTxRecord> read_raw_records(const std::filesystem::path& path);
void write_raw_records(std::ostream& out, std::span<const RawTxRecord> records);

/// Expands the address subgraph around `root_address` breadth-first,
/// undirected, up to `hop_bound` hops and at most `node_cap` nodes.
/// Local ids follow discovery order, so the root is n_0. Degrees, values,
/// time ranges and timestamps are computed over all records, not just the
/// retained neighbourhood.
TransactionGraph ingest_raw(std::span<const RawTxRecord> records, std::string_view root_address,
                            std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound,
                            std::size_t node_cap = kDefaultNodeCap);

}  // namespace llm4tg::io
