#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace llm4tg::testing {

namespace {

Amount coins(std::string_view text) { return Amount::parse(text); }

Node address(std::uint32_t id, std::uint64_t in, std::uint64_t out, std::string_view in_v, std::string_view out_v,
             std::optional<std::uint64_t> time_range) {
  Node n;
  n.id = NodeId{id};
  n.type = NodeType::Address;
  n.in_degree = in;
  n.out_degree = out;
  n.in_value = coins(in_v);
  n.out_value = coins(out_v);
  n.time_range = time_range;
  return n;
}

Node transaction(std::uint32_t id, std::uint64_t in, std::uint64_t out, std::string_view in_v,
                 std::string_view out_v) {
  Node n;
  n.id = NodeId{id};
  n.type = NodeType::Transaction;
  n.in_degree = in;
  n.out_degree = out;
  n.in_value = coins(in_v);
  n.out_value = coins(out_v);
  return n;
}

std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

bool chance(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

// Heavy-tailed positive integer, mostly small.
std::uint64_t heavy_tail(std::mt19937_64& rng, std::uint64_t cap) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double v = std::floor(1.0 / std::pow(1.0 - u * 0.999, 1.3));
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(v), cap);
}

Amount random_amount(std::mt19937_64& rng, bool tie_prone) {
  if (tie_prone) {
    static constexpr std::int64_t kSmall[] = {0, 100'000'000, 150'000'000, 200'000'001};
    return Amount::from_units(kSmall[rng() % 4]);
  }
  // Log-uniform between 1e-5 and 1e3 coins with full 8-decimal precision.
  const double exponent = -5.0 + 8.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return Amount::from_units(static_cast<std::int64_t>(std::pow(10.0, exponent) * 1e8) + 1);
}

struct Skeleton {
  std::vector<NodeType> types;
  std::vector<std::uint32_t> layers;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;  // (address, transaction) generation indices
  std::vector<bool> address_to_tx;                              // direction per link
};

// Tree growth followed by extra links between adjacent layers.
Skeleton grow(std::mt19937_64& rng, std::size_t n, std::uint32_t hop_bound, double extra_per_node,
              std::size_t max_children_hint = 0) {
  Skeleton s;
  s.types.push_back(NodeType::Address);
  s.layers.push_back(0);
  std::vector<std::uint32_t> open{0};
  std::set<std::pair<std::uint32_t, std::uint32_t>> linked;
  for (std::size_t i = 1; i < n; ++i) {
    std::uint32_t parent;
    if (max_children_hint > 0) {
      // Prefer recent nodes so deep layers fill before the budget runs out.
      const std::size_t window = std::min<std::size_t>(open.size(), max_children_hint);
      parent = open[open.size() - 1 - rng() % window];
    } else {
      parent = open[rng() % open.size()];
    }
    const NodeType type = s.types[parent] == NodeType::Address ? NodeType::Transaction : NodeType::Address;
    const std::uint32_t layer = s.layers[parent] + 1;
    const auto idx = static_cast<std::uint32_t>(s.types.size());
    s.types.push_back(type);
    s.layers.push_back(layer);
    const auto link = type == NodeType::Transaction ? std::pair{parent, idx} : std::pair{idx, parent};
    linked.insert(link);
    s.links.push_back(link);
    s.address_to_tx.push_back(chance(rng, 0.5));
    if (layer < hop_bound) open.push_back(idx);
  }
  std::vector<std::vector<std::uint32_t>> by_layer(hop_bound + 1);
  for (std::uint32_t i = 0; i < s.types.size(); ++i) by_layer[s.layers[i]].push_back(i);
  const auto extra = static_cast<std::size_t>(extra_per_node * static_cast<double>(n));
  for (std::size_t k = 0, attempts = 0; k < extra && attempts < extra * 20; ++attempts) {
    const std::uint32_t a = static_cast<std::uint32_t>(rng() % s.types.size());
    const std::uint32_t la = s.layers[a];
    const std::uint32_t lb = chance(rng, 0.5) ? la + 1 : (la == 0 ? 1 : la - 1);
    if (lb > hop_bound || by_layer[lb].empty()) continue;
    const std::uint32_t b = by_layer[lb][rng() % by_layer[lb].size()];
    const auto link = s.types[a] == NodeType::Address ? std::pair{a, b} : std::pair{b, a};
    if (!linked.insert(link).second) continue;
    s.links.push_back(link);
    s.address_to_tx.push_back(chance(rng, 0.5));
    ++k;
  }
  return s;
}

}  // namespace

TransactionGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  const std::size_t n = static_cast<std::size_t>(uniform(rng, o.min_nodes, o.max_nodes));
  const Skeleton s = grow(rng, n, o.hop_bound, o.extra_edges_per_node);

  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  if (o.shuffle_ids) std::shuffle(ids.begin() + 1, ids.end(), rng);

  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Node node;
    node.id = NodeId{ids[i]};
    node.type = s.types[i];
    auto maybe = [&]() { return !chance(rng, o.missing_attribute_probability); };
    const std::uint64_t deg_cap = o.tie_prone ? 3 : 500;
    if (maybe()) node.in_degree = o.tie_prone ? uniform(rng, 0, deg_cap) : heavy_tail(rng, deg_cap);
    if (maybe()) node.out_degree = o.tie_prone ? uniform(rng, 0, deg_cap) : heavy_tail(rng, deg_cap);
    if (maybe()) node.in_value = random_amount(rng, o.tie_prone);
    if (maybe()) node.out_value = random_amount(rng, o.tie_prone);
    if (node.is_address() && chance(rng, o.time_range_probability)) {
      node.time_range = o.tie_prone ? uniform(rng, 0, 2) : uniform(rng, 0, 50'000'000);
    }
    if (node.is_address() && !node.in_degree && !node.out_degree && !node.in_value && !node.out_value &&
        !node.time_range) {
      node.in_degree = uniform(rng, 0, deg_cap);
    }
    if (node.is_transaction() && o.timestamps) {
      node.timestamp = static_cast<std::int64_t>(1'562'889'600 + rng() % 58'000'000);
    }
    nodes.push_back(std::move(node));
  }

  std::vector<Edge> edges;
  edges.reserve(s.links.size());
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const NodeId a{ids[s.links[k].first]};
    const NodeId t{ids[s.links[k].second]};
    Edge e = s.address_to_tx[k] ? Edge{a, t, std::nullopt} : Edge{t, a, std::nullopt};
    if (o.edge_values) e.value = random_amount(rng, false);
    edges.push_back(e);
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return build_graph(std::move(nodes), std::move(edges), kRootId, o.hop_bound);
}

TransactionGraph basd_like_graph(std::size_t n_nodes, std::uint64_t seed, double edges_per_node) {
  std::mt19937_64 rng(seed);
  const Skeleton s = grow(rng, n_nodes, 5, edges_per_node, 64);
  std::vector<std::uint64_t> in_links(n_nodes, 0), out_links(n_nodes, 0);
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const auto [a, t] = s.links[k];
    if (s.address_to_tx[k]) {
      ++out_links[a];
      ++in_links[t];
    } else {
      ++out_links[t];
      ++in_links[a];
    }
  }
  std::vector<Node> nodes;
  nodes.reserve(n_nodes);
  for (std::uint32_t i = 0; i < n_nodes; ++i) {
    Node node;
    node.id = NodeId{i};
    node.type = s.types[i];
    // Frozen statistics cover the whole chain history, so they are at least
    // the locally visible counts.
    node.in_degree = in_links[i] + heavy_tail(rng, 400);
    node.out_degree = out_links[i] + heavy_tail(rng, 400);
    node.in_value = random_amount(rng, false);
    node.out_value = random_amount(rng, false);
    if (node.is_address()) node.time_range = uniform(rng, 0, 58'000'000);
    nodes.push_back(std::move(node));
  }
  std::vector<Edge> edges;
  edges.reserve(s.links.size());
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const NodeId a{s.links[k].first};
    const NodeId t{s.links[k].second};
    edges.push_back(s.address_to_tx[k] ? Edge{a, t, std::nullopt} : Edge{t, a, std::nullopt});
  }
  return build_graph(std::move(nodes), std::move(edges));
}

TransactionGraph path3() {
  std::vector<Node> nodes = {
      address(0, 0, 1, "0", "1.5", 0),
      transaction(1, 1, 1, "1.5", "1.4999"),
      address(2, 1, 0, "1.4999", "0", 0),
  };
  return build_graph(nodes, {{NodeId{0}, NodeId{1}, std::nullopt}, {NodeId{1}, NodeId{2}, std::nullopt}});
}

TransactionGraph asymmetric_star() {
  std::vector<Node> nodes = {
      address(0, 1, 1, "2", "2", 100),
      transaction(1, 1, 3, "2", "1.9999"),
      address(2, 1, 0, "0.0001", "0", 0),
      address(3, 10, 9, "5", "4.5", 1000),
      address(4, 300, 280, "500", "499", 100000),
  };
  std::vector<Edge> edges = {
      {NodeId{0}, NodeId{1}, std::nullopt},
      {NodeId{1}, NodeId{2}, std::nullopt},
      {NodeId{1}, NodeId{3}, std::nullopt},
      {NodeId{1}, NodeId{4}, std::nullopt},
  };
  return build_graph(nodes, edges);
}

TransactionGraph bc1qah() {
  std::vector<Node> nodes = {
      address(0, 2, 2, "0.0105", "0.0105", 1812),
      transaction(1, 4, 41, "77.29740945", "77.29452845"),
      transaction(2, 3, 37, "12.53371002", "12.53062902"),
  };
  std::vector<Edge> edges;
  auto link = [&](std::uint32_t from, std::uint32_t to) { edges.push_back({NodeId{from}, NodeId{to}, std::nullopt}); };
  link(0, 1);
  link(0, 2);
  // Layer 2: funders of n_1/n_2 and recipients.
  for (std::uint32_t id = 3; id <= 20; ++id) {
    const std::uint64_t in = 1 + id % 4;
    const std::uint64_t out = 1 + id % 3;
    const std::string in_v = "0." + std::to_string(10'000'000 + id * 1'234'567);
    const std::string out_v = "0." + std::to_string(10'000'000 + id * 1'234'561);
    if (id == 14) {
      nodes.push_back(address(14, 198, 188, "1520.36271544", "1519.98812733", 51'840'000));
    } else {
      nodes.push_back(address(id, in, out, in_v, out_v, 3600 * id));
    }
  }
  for (std::uint32_t id : {3u, 4u, 5u}) link(id, 1);
  for (std::uint32_t id : {6u, 7u}) link(id, 2);
  for (std::uint32_t id = 8; id <= 14; ++id) link(1, id);
  for (std::uint32_t id = 14; id <= 20; ++id) link(2, id);
  // Layer 3 transactions spending from layer 2, paying layer 4.
  nodes.push_back(transaction(21, 2, 5, "3.2", "3.1998"));
  nodes.push_back(transaction(22, 1, 2, "0.75", "0.7497"));
  nodes.push_back(transaction(23, 3, 12, "48.00120001", "48.0009"));
  nodes.push_back(transaction(24, 1, 1, "0.02", "0.0199"));
  link(14, 21);
  link(9, 21);
  link(14, 23);
  link(16, 22);
  link(19, 24);
  link(23, 12);
  for (std::uint32_t id = 25; id <= 28; ++id) {
    nodes.push_back(address(id, 1 + id % 5, id % 2, "0.5", id % 2 ? "0.5" : "0", 600 * id));
  }
  link(21, 25);
  link(21, 26);
  link(22, 27);
  link(23, 28);
  link(24, 28);
  return build_graph(nodes, edges);
}

TransactionGraph bc1q4w() {
  std::vector<Node> nodes = {
      address(0, 1, 1, "6.0003", "6.0003", 4200),
      transaction(1, 1, 600, "6.0003", "5.99985"),
  };
  std::vector<Edge> edges = {{NodeId{0}, NodeId{1}, std::nullopt}};
  for (std::uint32_t id = 2; id < 602; ++id) {
    nodes.push_back(address(id, 1 + id % 3, id % 2, "0.00999975", id % 2 ? "0.00999975" : "0", 60 * (id % 50)));
    edges.push_back({NodeId{1}, NodeId{id}, std::nullopt});
  }
  for (std::uint32_t id = 602; id < 612; ++id) {
    nodes.push_back(transaction(id, 1, 2, "0.00999975", "0.00989975"));
    const std::uint32_t spender = 3 + 2 * (id - 602);
    edges.push_back({NodeId{spender}, NodeId{id}, std::nullopt});
  }
  return build_graph(nodes, edges);
}

std::vector<io::RawTxRecord> sample_records() {
  using io::RawTxRecord;
  using io::TxLeg;
  return {
      RawTxRecord{"t1", 1'600'000'000, {{"funder", coins("1.0")}}, {{"root", coins("0.9")}, {"change", coins("0.0999")}}},
      RawTxRecord{"t2", 1'600'000'600, {{"root", coins("0.5")}}, {{"payee", coins("0.4999")}}},
      RawTxRecord{"t3", 1'600'003'600, {{"funder", coins("2")}, {"other", coins("1")}}, {{"root", coins("2.9999")}}},
      RawTxRecord{"t4", 1'600'010'000, {{"payee", coins("0.4999")}}, {{"far", coins("0.4998")}}},
      RawTxRecord{"t5", 1'600'020'000, {{"stranger", coins("7")}}, {{"nobody", coins("6.9999")}}},
  };
}

}  // namespace llm4tg::testing
