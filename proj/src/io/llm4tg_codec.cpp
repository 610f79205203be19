#include "llm4tg/io/llm4tg_codec.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "llm4tg/errors.hpp"

namespace llm4tg::io {

namespace {

void append_id_list(std::string& out, const std::vector<NodeId>& ids, const TransactionGraph& g) {
  out += '[';
  bool first = true;
  for (NodeId id : ids) {
    if (!g.contains(id)) {
      continue;
    }
    if (!first) {
      out += ", ";
    }
    first = false;
    out += id.str();
  }
  out += ']';
}

void append_node_line(std::string& out, const Node& n, const TransactionGraph& g) {
  out += n.id.str();
  out += n.is_address() ? " address: {" : " transaction: {";
  bool first = true;
  auto key = [&](std::string_view name) {
    if (!first) {
      out += ", ";
    }
    first = false;
    out += name;
    out += ": ";
  };
  if (n.in_degree) {
    key("in_degree");
    out += std::to_string(*n.in_degree);
  }
  if (n.out_degree) {
    key("out_degree");
    out += std::to_string(*n.out_degree);
  }
  if (n.in_value) {
    key("in_value");
    out += n.in_value->to_string();
  }
  if (n.out_value) {
    key("out_value");
    out += n.out_value->to_string();
  }
  if (n.is_address()) {
    if (n.time_range) {
      key("time_range");
      out += std::to_string(*n.time_range);
    }
    if (first) {
      throw FormatError("address node " + n.id.str() + " has no attributes to render");
    }
  } else {
    key("in_nodes");
    append_id_list(out, n.in_nodes, g);
    key("out_nodes");
    append_id_list(out, n.out_nodes, g);
  }
  out += "}\n";
}

/// Single-line cursor that reports 1-based columns.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_no_, pos_ + 1); }

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }

  bool peek(char ch) {
    skip_space();
    return pos_ < line_.size() && line_[pos_] == ch;
  }

  void expect(char ch) {
    skip_space();
    if (pos_ >= line_.size() || line_[pos_] != ch) {
      fail(std::string("expected '") + ch + "'");
    }
    ++pos_;
  }

  bool try_consume(char ch) {
    if (peek(ch)) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size()) {
      const char ch = line_[pos_];
      if (!((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_')) {
        break;
      }
      ++pos_;
    }
    if (start == pos_) {
      fail("expected a word");
    }
    return line_.substr(start, pos_ - start);
  }

  void expect_word(std::string_view expected) {
    const std::size_t start = (skip_space(), pos_);
    if (word() != expected) {
      pos_ = start;
      fail("expected '" + std::string(expected) + "'");
    }
  }

  std::uint64_t number() {
    skip_space();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + pos_, line_.data() + line_.size(), value);
    if (ec != std::errc{}) {
      fail(ec == std::errc::result_out_of_range ? "integer out of range" : "expected an integer");
    }
    pos_ = static_cast<std::size_t>(ptr - line_.data());
    if (pos_ < line_.size() && line_[pos_] == '.') {
      pos_ = start;
      fail("expected an integer");
    }
    return value;
  }

  Amount amount() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && ((line_[pos_] >= '0' && line_[pos_] <= '9') || line_[pos_] == '.')) {
      ++pos_;
    }
    auto parsed = Amount::try_parse(line_.substr(start, pos_ - start));
    if (!parsed) {
      pos_ = start;
      fail("expected a non-negative decimal with at most 8 fractional digits");
    }
    return *parsed;
  }

  NodeId node_id() {
    skip_space();
    const std::size_t start = pos_;
    auto id = NodeId::parse(word());
    if (!id) {
      pos_ = start;
      fail("expected a node id of the form n_<k>");
    }
    return *id;
  }

  std::size_t column() const { return pos_ + 1; }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

struct ParsedNode {
  Node node;
  std::uint32_t declared_layer = 0;
  std::size_t line_no = 0;
  std::size_t id_col = 1;
  std::vector<std::size_t> in_cols;  // column of each in_nodes entry
  std::vector<std::size_t> out_cols;
};

std::vector<NodeId> parse_id_list(LineCursor& cur, std::vector<std::size_t>& cols) {
  std::vector<NodeId> ids;
  cur.expect('[');
  if (cur.try_consume(']')) {
    return ids;
  }
  do {
    cols.push_back((cur.skip_space(), cur.column()));
    ids.push_back(cur.node_id());
  } while (cur.try_consume(','));
  cur.expect(']');
  return ids;
}

void parse_properties(LineCursor& cur, ParsedNode& pn) {
  Node& n = pn.node;
  cur.expect('{');
  std::unordered_set<std::string_view> seen;
  do {
    const std::size_t key_col = (cur.skip_space(), cur.column());
    const std::string_view key = cur.word();
    if (!seen.insert(key).second) {
      throw SyntaxError("duplicate property '" + std::string(key) + "'", cur.line_no(), key_col);
    }
    cur.expect(':');
    if (key == "in_degree") {
      n.in_degree = cur.number();
    } else if (key == "out_degree") {
      n.out_degree = cur.number();
    } else if (key == "in_value") {
      n.in_value = cur.amount();
    } else if (key == "out_value") {
      n.out_value = cur.amount();
    } else if (key == "time_range" && n.is_address()) {
      n.time_range = cur.number();
    } else if (key == "in_nodes" && n.is_transaction()) {
      n.in_nodes = parse_id_list(cur, pn.in_cols);
    } else if (key == "out_nodes" && n.is_transaction()) {
      n.out_nodes = parse_id_list(cur, pn.out_cols);
    } else {
      throw SyntaxError("property '" + std::string(key) + "' is not valid for " +
                            std::string(to_string(n.type)) + " nodes",
                        cur.line_no(), key_col);
    }
  } while (cur.try_consume(','));
  cur.expect('}');
  if (!cur.at_end()) {
    cur.fail("unexpected trailing characters");
  }
}

// Re-raises a graph error from build_graph at the line of the first node
// its message names.
[[noreturn]] void rethrow_at_node(const GraphError& e, const std::vector<ParsedNode>& parsed,
                                  const std::map<std::uint32_t, std::size_t>& by_id) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::string what = e.what();
  for (std::size_t at = what.find("n_"); at != std::string::npos; at = what.find("n_", at + 1)) {
    std::size_t end = at + 2;
    while (end < what.size() && what[end] >= '0' && what[end] <= '9') ++end;
    if (auto id = NodeId::parse(std::string_view(what).substr(at, end - at))) {
      if (auto it = by_id.find(id->value); it != by_id.end()) {
        line = parsed[it->second].line_no;
        col = parsed[it->second].id_col;
        break;
      }
    }
  }
  if (dynamic_cast<const DisconnectedNode*>(&e)) throw DisconnectedNode(what, line, col);
  if (dynamic_cast<const HopBoundExceeded*>(&e)) throw HopBoundExceeded(what, line, col);
  if (dynamic_cast<const BipartiteViolation*>(&e)) throw BipartiteViolation(what, line, col);
  if (dynamic_cast<const WrongNodeType*>(&e)) throw WrongNodeType(what, line, col);
  if (dynamic_cast<const InvalidEdge*>(&e)) throw InvalidEdge(what, line, col);
  if (dynamic_cast<const RootNotAddress*>(&e)) throw RootNotAddress(what, line, col);
  if (dynamic_cast<const UnknownNode*>(&e)) throw UnknownNode(what, line, col);
  if (dynamic_cast<const DuplicateNode*>(&e)) throw DuplicateNode(what, line, col);
  throw GraphError(what, line, col);
}

NodeType parse_node_type(LineCursor& cur) {
  const std::size_t col = (cur.skip_space(), cur.column());
  const std::string_view w = cur.word();
  if (w == "address") {
    return NodeType::Address;
  }
  if (w == "transaction") {
    return NodeType::Transaction;
  }
  throw SyntaxError("expected 'address' or 'transaction'", cur.line_no(), col);
}

}  // namespace

Llm4tgDocument serialize_llm4tg(const TransactionGraph& g) {
  Llm4tgDocument doc;
  doc.canonical = true;
  const std::uint32_t layers = g.max_layer() + 1;
  std::vector<std::vector<std::uint32_t>> by_layer(layers);
  for (std::size_t i = 0; i < g.size(); ++i) {
    by_layer[g.layer_at(i)].push_back(static_cast<std::uint32_t>(i));
  }
  doc.text.reserve(g.size() * 96 + g.edges().size() * 8);
  for (std::uint32_t layer = 0; layer < layers; ++layer) {
    const auto& members = by_layer[layer];
    const NodeType type = g.nodes()[members.front()].type;
    doc.layer_headers.push_back({layer, members.size(), type});
    doc.text += "Layer " + std::to_string(layer) + ": " + std::to_string(members.size()) + " " +
                std::string(to_string(type)) + " nodes\n";
    for (std::uint32_t idx : members) {
      append_node_line(doc.text, g.nodes()[idx], g);
    }
  }
  return doc;
}

TransactionGraph parse_llm4tg(std::string_view text, std::uint32_t hop_bound) {
  std::vector<ParsedNode> parsed;
  std::optional<LayerHeader> current;
  std::size_t current_seen = 0;
  std::size_t header_line = 0;

  auto close_layer = [&]() {
    if (current && current_seen != current->node_count) {
      throw LayerCountMismatch("layer " + std::to_string(current->layer) + " announces " +
                                   std::to_string(current->node_count) + " nodes but lists " +
                                   std::to_string(current_seen),
                               header_line, 1);
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    LineCursor cur(line, line_no);
    if (cur.at_end()) {
      continue;
    }
    if (line.find_first_not_of(" \t") == line.find("Layer")) {
      close_layer();
      cur.expect_word("Layer");
      LayerHeader header;
      header.layer = static_cast<std::uint32_t>(cur.number());
      cur.expect(':');
      header.node_count = cur.number();
      header.type = parse_node_type(cur);
      cur.expect_word("nodes");
      if (!cur.at_end()) {
        cur.fail("unexpected trailing characters");
      }
      if (header.node_count == 0) {
        throw SyntaxError("a layer must contain at least one node", line_no, 1);
      }
      current = header;
      current_seen = 0;
      header_line = line_no;
      continue;
    }
    if (!current) {
      cur.fail("node line before any layer header");
    }
    ParsedNode pn;
    pn.line_no = line_no;
    pn.declared_layer = current->layer;
    pn.id_col = (cur.skip_space(), cur.column());
    pn.node.id = cur.node_id();
    const std::size_t type_col = (cur.skip_space(), cur.column());
    pn.node.type = parse_node_type(cur);
    if (pn.node.type != current->type) {
      throw LayerMismatch(std::string(to_string(pn.node.type)) + " node " + pn.node.id.str() +
                              " listed under a layer of " + std::string(to_string(current->type)) + " nodes",
                          line_no, type_col);
    }
    cur.expect(':');
    parse_properties(cur, pn);
    ++current_seen;
    parsed.push_back(std::move(pn));
  }
  close_layer();
  if (parsed.empty()) {
    throw SyntaxError("document contains no layers", 1, 1);
  }

  std::map<std::uint32_t, std::size_t> by_id;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!by_id.emplace(parsed[i].node.id.value, i).second) {
      throw DuplicateNode("node " + parsed[i].node.id.str() + " is defined twice", parsed[i].line_no,
                          parsed[i].id_col);
    }
  }

  std::vector<Edge> edges;
  for (const auto& [id, idx] : by_id) {
    const ParsedNode& pn = parsed[idx];
    if (!pn.node.is_transaction()) {
      continue;
    }
    std::set<std::uint32_t> seen_in, seen_out;
    auto check = [&](NodeId ref, std::size_t col, std::set<std::uint32_t>& seen) {
      auto it = by_id.find(ref.value);
      if (it == by_id.end()) {
        throw DanglingNodeReference("transaction " + pn.node.id.str() + " references undefined node " + ref.str(),
                                    pn.line_no, col);
      }
      if (!parsed[it->second].node.is_address()) {
        throw BipartiteViolation("transaction " + pn.node.id.str() + " lists transaction " + ref.str(),
                                 pn.line_no, col);
      }
      if (!seen.insert(ref.value).second) {
        throw InvalidEdge("transaction " + pn.node.id.str() + " lists " + ref.str() + " twice", pn.line_no, col);
      }
    };
    for (std::size_t k = 0; k < pn.node.in_nodes.size(); ++k) {
      check(pn.node.in_nodes[k], pn.in_cols[k], seen_in);
      edges.push_back({pn.node.in_nodes[k], pn.node.id, std::nullopt});
    }
    for (std::size_t k = 0; k < pn.node.out_nodes.size(); ++k) {
      check(pn.node.out_nodes[k], pn.out_cols[k], seen_out);
      edges.push_back({pn.node.id, pn.node.out_nodes[k], std::nullopt});
    }
  }

  auto root_it = by_id.find(kRootId.value);
  if (root_it == by_id.end()) {
    throw UnknownNode("the root node n_0 is not defined", 1, 1);
  }
  if (!parsed[root_it->second].node.is_address()) {
    const ParsedNode& root = parsed[root_it->second];
    throw RootNotAddress("the root node n_0 is a transaction", root.line_no, root.id_col);
  }

  std::vector<Node> nodes;
  nodes.reserve(parsed.size());
  for (const ParsedNode& pn : parsed) {
    nodes.push_back(pn.node);
  }
  std::optional<TransactionGraph> built;
  try {
    built = build_graph(std::move(nodes), std::move(edges), kRootId, hop_bound);
  } catch (const GraphError& e) {
    rethrow_at_node(e, parsed, by_id);
  }
  const TransactionGraph& g = *built;
  for (const ParsedNode& pn : parsed) {
    const std::uint32_t actual = g.layer_of(pn.node.id);
    if (actual != pn.declared_layer) {
      throw LayerMismatch("node " + pn.node.id.str() + " is listed under layer " +
                              std::to_string(pn.declared_layer) + " but lies " + std::to_string(actual) +
                              " hops from n_0",
                          pn.line_no, pn.id_col);
    }
  }
  return *built;
}

}  // namespace llm4tg::io
