#include "llm4tg/io/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "llm4tg/errors.hpp"

namespace llm4tg::io {

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

struct AddressStats {
  std::vector<std::uint32_t> txs;  // distinct, in record order
  std::uint64_t in_degree = 0;
  std::uint64_t out_degree = 0;
  Amount in_value;
  Amount out_value;
  std::int64_t first_seen = 0;
  std::int64_t last_seen = 0;
};

// Per-transaction legs merged by address, in order of first appearance.
struct MergedTx {
  std::vector<std::pair<std::uint32_t, Amount>> inputs;
  std::vector<std::pair<std::uint32_t, Amount>> outputs;
  Amount in_value;
  Amount out_value;
};

void merge_leg(std::vector<std::pair<std::uint32_t, Amount>>& legs, std::uint32_t address, Amount amount) {
  for (auto& [a, v] : legs) {
    if (a == address) {
      v += amount;
      return;
    }
  }
  legs.emplace_back(address, amount);
}

}  // namespace

std::vector<RawTxRecord> read_raw_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw EmptyInput("raw record file is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw FormatError("raw record header lacks column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_tx = column("tx_id");
  const std::size_t c_ts = column("timestamp");
  const std::size_t c_side = column("side");
  const std::size_t c_addr = column("address");
  const std::size_t c_amount = column("amount");

  std::vector<RawTxRecord> records;
  std::unordered_map<std::string, std::size_t> by_tx;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    auto fail = [&](const std::string& what) {
      throw FormatError("raw records line " + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != header.size()) fail("expected " + std::to_string(header.size()) + " fields");
    std::int64_t ts = 0;
    const std::string& ts_text = fields[c_ts];
    auto [ptr, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), ts);
    if (ec != std::errc{} || ptr != ts_text.data() + ts_text.size()) fail("bad timestamp '" + ts_text + "'");
    auto amount = Amount::try_parse(fields[c_amount]);
    if (!amount) fail("bad amount '" + fields[c_amount] + "'");
    if (fields[c_addr].empty()) fail("empty address");
    auto [it, inserted] = by_tx.emplace(fields[c_tx], records.size());
    if (inserted) {
      records.push_back({fields[c_tx], ts, {}, {}});
    } else if (records[it->second].timestamp != ts) {
      fail("transaction " + fields[c_tx] + " has conflicting timestamps");
    }
    RawTxRecord& rec = records[it->second];
    if (fields[c_side] == "in") {
      rec.inputs.push_back({fields[c_addr], *amount});
    } else if (fields[c_side] == "out") {
      rec.outputs.push_back({fields[c_addr], *amount});
    } else {
      fail("side must be 'in' or 'out'");
    }
  }
  return records;
}

std::vector<RawTxRecord> read_raw_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  return read_raw_records(in);
}

void write_raw_records(std::ostream& out, std::span<const RawTxRecord> records) {
  out << "tx_id,timestamp,side,address,amount\n";
  for (const RawTxRecord& r : records) {
    for (const TxLeg& leg : r.inputs) {
      out << r.tx_id << ',' << r.timestamp << ",in," << leg.address << ',' << leg.amount.to_string() << '\n';
    }
    for (const TxLeg& leg : r.outputs) {
      out << r.tx_id << ',' << r.timestamp << ",out," << leg.address << ',' << leg.amount.to_string() << '\n';
    }
  }
}

TransactionGraph ingest_raw(std::span<const RawTxRecord> records, std::string_view root_address,
                            std::uint32_t hop_bound, std::size_t node_cap) {
  if (records.empty()) {
    throw EmptyInput("no transaction records");
  }
  std::vector<std::string> address_names;
  std::unordered_map<std::string, std::uint32_t> address_index;
  std::vector<AddressStats> addresses;
  std::vector<MergedTx> txs(records.size());

  auto intern = [&](const std::string& name) {
    auto [it, inserted] = address_index.emplace(name, static_cast<std::uint32_t>(addresses.size()));
    if (inserted) {
      address_names.push_back(name);
      addresses.emplace_back();
    }
    return it->second;
  };

  for (std::uint32_t t = 0; t < records.size(); ++t) {
    const RawTxRecord& rec = records[t];
    if (rec.inputs.empty() && rec.outputs.empty()) {
      throw FormatError("transaction " + rec.tx_id + " has neither inputs nor outputs");
    }
    for (const TxLeg& leg : rec.inputs) {
      merge_leg(txs[t].inputs, intern(leg.address), leg.amount);
      txs[t].in_value += leg.amount;
    }
    for (const TxLeg& leg : rec.outputs) {
      merge_leg(txs[t].outputs, intern(leg.address), leg.amount);
      txs[t].out_value += leg.amount;
    }
    auto touch = [&](std::uint32_t a) {
      AddressStats& s = addresses[a];
      if (s.txs.empty()) {
        s.first_seen = s.last_seen = rec.timestamp;
      }
      if (s.txs.empty() || s.txs.back() != t) {
        s.txs.push_back(t);
      }
      s.first_seen = std::min(s.first_seen, rec.timestamp);
      s.last_seen = std::max(s.last_seen, rec.timestamp);
    };
    for (const auto& [a, v] : txs[t].inputs) {
      touch(a);
      addresses[a].out_degree += 1;
      addresses[a].out_value += v;
    }
    for (const auto& [a, v] : txs[t].outputs) {
      touch(a);
      addresses[a].in_degree += 1;
      addresses[a].in_value += v;
    }
  }

  auto root_it = address_index.find(std::string(root_address));
  if (root_it == address_index.end()) {
    throw RootAbsent("root address " + std::string(root_address) + " appears in no record");
  }

  // BFS over the address/transaction incidence graph. Queue entries encode
  // the kind in the top bit.
  constexpr std::uint32_t kTxBit = 0x8000'0000u;
  std::unordered_map<std::uint32_t, std::uint32_t> local_id;  // encoded key -> local id
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> layer;
  auto discover = [&](std::uint32_t key, std::uint32_t at_layer) {
    if (order.size() >= node_cap || at_layer > hop_bound || local_id.contains(key)) {
      return;
    }
    local_id.emplace(key, static_cast<std::uint32_t>(order.size()));
    order.push_back(key);
    layer.push_back(at_layer);
  };
  discover(root_it->second, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t key = order[head];
    const std::uint32_t next_layer = layer[head] + 1;
    if (key & kTxBit) {
      const MergedTx& tx = txs[key & ~kTxBit];
      for (const auto& [a, v] : tx.inputs) discover(a, next_layer);
      for (const auto& [a, v] : tx.outputs) discover(a, next_layer);
    } else {
      for (std::uint32_t t : addresses[key].txs) discover(t | kTxBit, next_layer);
    }
  }

  std::vector<Node> nodes;
  nodes.reserve(order.size());
  std::vector<Edge> edges;
  for (std::uint32_t local = 0; local < order.size(); ++local) {
    const std::uint32_t key = order[local];
    Node n;
    n.id = NodeId{local};
    if (key & kTxBit) {
      const std::uint32_t t = key & ~kTxBit;
      const MergedTx& tx = txs[t];
      n.type = NodeType::Transaction;
      n.original_id = records[t].tx_id;
      n.in_degree = tx.inputs.size();
      n.out_degree = tx.outputs.size();
      n.in_value = tx.in_value;
      n.out_value = tx.out_value;
      n.timestamp = records[t].timestamp;
      for (const auto& [a, v] : tx.inputs) {
        if (auto it = local_id.find(a); it != local_id.end()) edges.push_back({NodeId{it->second}, n.id, v});
      }
      for (const auto& [a, v] : tx.outputs) {
        if (auto it = local_id.find(a); it != local_id.end()) edges.push_back({n.id, NodeId{it->second}, v});
      }
    } else {
      const AddressStats& s = addresses[key];
      n.type = NodeType::Address;
      n.original_id = address_names[key];
      n.in_degree = s.in_degree;
      n.out_degree = s.out_degree;
      n.in_value = s.in_value;
      n.out_value = s.out_value;
      n.time_range = static_cast<std::uint64_t>(s.last_seen - s.first_seen);
    }
    nodes.push_back(std::move(n));
  }
  return build_graph(std::move(nodes), std::move(edges), kRootId, hop_bound);
}

}  // namespace llm4tg::io
