#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "llm4tg/graph.hpp"

namespace llm4tg::io {

struct LayerHeader {
  std::uint32_t layer = 0;
  std::size_t node_count = 0;
  NodeType type = NodeType::Address;

  bool operator==(const LayerHeader&) const = default;
};

/// LLM4TG text plus the layer headers it declares.
struct Llm4tgDocument {
  std::string text;
  std::vector<LayerHeader> layer_headers;
  bool canonical = false;
};

/// Canonical rendering: layers ascending, nodes by ascending id, one node
/// per line, fixed property order, LF line endings.
Llm4tgDocument serialize_llm4tg(const TransactionGraph& g);

/// Parses LLM4TG text. Properties may appear in any order; whitespace
/// between tokens is free. The node `n_0` is taken as the root.
///
/// Throws SyntaxError (with line and column), LayerCountMismatch when a
/// header's count disagrees with its node lines, LayerMismatch when a node
/// sits under the wrong header, DuplicateNode, DanglingNodeReference, and
/// any GraphError raised while building the graph.
TransactionGraph parse_llm4tg(std::string_view text,
                              std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound);

}  // namespace llm4tg::io
