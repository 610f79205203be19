#include "llm4tg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <utility>

#include "llm4tg/errors.hpp"

namespace llm4tg {

namespace {

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

}  // namespace

std::optional<NodeId> NodeId::parse(std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "n_") {
    return std::nullopt;
  }
  std::string_view digits = text.substr(2);
  if (digits.size() > 1 && digits.front() == '0') {
    return std::nullopt;
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return NodeId{value};
}

std::string_view to_string(NodeType t) {
  return t == NodeType::Address ? "address" : "transaction";
}

std::size_t TransactionGraph::index_of(NodeId id) const {
  auto it = index_.find(id.value);
  if (it == index_.end()) {
    throw UnknownNode("unknown node " + id.str());
  }
  return it->second;
}

std::uint32_t TransactionGraph::max_layer() const {
  return layers_.empty() ? 0 : *std::max_element(layers_.begin(), layers_.end());
}

std::vector<NodeId> TransactionGraph::shortest_path(NodeId id) const {
  std::vector<NodeId> path;
  for (std::uint32_t at = static_cast<std::uint32_t>(index_of(id)); at != kUnvisited; at = parent_[at]) {
    path.push_back(nodes_[at].id);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

TransactionGraph TransactionGraph::with_label(std::optional<Category> label) const {
  TransactionGraph copy = *this;
  copy.label_ = label;
  return copy;
}

TransactionGraph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, NodeId root,
                             std::uint32_t hop_bound, std::optional<Category> label) {
  TransactionGraph g;
  g.hop_bound_ = hop_bound;
  g.label_ = label;

  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  g.index_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (!g.index_.emplace(n.id.value, static_cast<std::uint32_t>(i)).second) {
      throw DuplicateNode("duplicate node " + n.id.str());
    }
    if (n.is_transaction() && n.time_range) {
      throw WrongNodeType("time_range on transaction node " + n.id.str());
    }
    if (n.is_address() && n.timestamp) {
      throw WrongNodeType("timestamp on address node " + n.id.str());
    }
    n.in_nodes.clear();
    n.out_nodes.clear();
  }
  g.nodes_ = std::move(nodes);

  auto root_it = g.index_.find(root.value);
  if (root_it == g.index_.end()) {
    throw UnknownNode("root " + root.str() + " is not among the nodes");
  }
  g.root_index_ = root_it->second;
  if (!g.nodes_[g.root_index_].is_address()) {
    throw RootNotAddress("root " + root.str() + " is a transaction node");
  }

  const std::size_t n = g.nodes_.size();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
  links.reserve(edges.size() * 2);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const Edge& e : edges) {
    auto from_it = g.index_.find(e.from.value);
    auto to_it = g.index_.find(e.to.value);
    if (from_it == g.index_.end() || to_it == g.index_.end()) {
      throw UnknownNode("edge " + e.from.str() + "->" + e.to.str() + " references an unknown node");
    }
    const std::uint32_t from = from_it->second;
    const std::uint32_t to = to_it->second;
    if (from == to) {
      throw InvalidEdge("self-loop on " + e.from.str());
    }
    Node& a = g.nodes_[from];
    Node& b = g.nodes_[to];
    if (a.type == b.type) {
      throw BipartiteViolation("edge " + e.from.str() + "->" + e.to.str() + " joins two " +
                               std::string(to_string(a.type)) + " nodes");
    }
    if (!seen.emplace(from, to).second) {
      throw InvalidEdge("duplicate edge " + e.from.str() + "->" + e.to.str());
    }
    if (b.is_transaction()) {
      b.in_nodes.push_back(a.id);
    } else {
      a.out_nodes.push_back(b.id);
    }
    links.emplace_back(from, to);
    links.emplace_back(to, from);
  }
  g.edges_ = std::move(edges);

  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  g.offsets_.assign(n + 1, 0);
  for (const auto& [a, b] : links) {
    ++g.offsets_[a + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.offsets_[i + 1] += g.offsets_[i];
  }
  g.adjacency_.reserve(links.size());
  for (const auto& [a, b] : links) {
    g.adjacency_.push_back(b);
  }

  // Neighbour lists are in ascending id order, so first discovery picks the
  // smallest-id parent on ties.
  g.layers_.assign(n, kUnvisited);
  g.parent_.assign(n, kUnvisited);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  queue.push_back(g.root_index_);
  g.layers_[g.root_index_] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t at = queue[head];
    for (std::uint32_t next : g.neighbors(at)) {
      if (g.layers_[next] == kUnvisited) {
        g.layers_[next] = g.layers_[at] + 1;
        g.parent_[next] = at;
        queue.push_back(next);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.layers_[i] == kUnvisited) {
      throw DisconnectedNode("node " + g.nodes_[i].id.str() + " is unreachable from " + root.str());
    }
    if (g.layers_[i] > hop_bound) {
      throw HopBoundExceeded("node " + g.nodes_[i].id.str() + " is " + std::to_string(g.layers_[i]) +
                             " hops from the root (bound " + std::to_string(hop_bound) + ")");
    }
  }
  return g;
}

std::uint32_t layer_of(const TransactionGraph& g, NodeId v) { return g.layer_of(v); }

std::vector<NodeId> shortest_path(const TransactionGraph& g, NodeId v) { return g.shortest_path(v); }

bool same_retained_content(const TransactionGraph& a, const TransactionGraph& b) {
  if (a.root() != b.root() || a.size() != b.size() || a.edges().size() != b.edges().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node& x = a.nodes()[i];
    const Node& y = b.nodes()[i];
    if (x.id != y.id || x.type != y.type || x.in_degree != y.in_degree || x.out_degree != y.out_degree ||
        x.in_value != y.in_value || x.out_value != y.out_value || x.time_range != y.time_range ||
        x.in_nodes != y.in_nodes || x.out_nodes != y.out_nodes) {
      return false;
    }
  }
  auto edge_set = [](const TransactionGraph& g) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(g.edges().size());
    for (const Edge& e : g.edges()) {
      out.emplace_back(e.from.value, e.to.value);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return edge_set(a) == edge_set(b);
}

}  // namespace llm4tg
