#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "llm4tg/graph.hpp"

namespace llm4tg::io {

enum class StandardFormat { GraphML, Gexf, Gml };

std::string_view to_string(StandardFormat f);
std::optional<StandardFormat> parse_standard_format(std::string_view name);

/// Renders `g` with node attributes named after the LLM4TG keys plus
/// `type`. Edges are written per transaction, funding edges first, so a
/// reader rebuilds the same adjacency order. Edge values are not written;
/// the output carries the same information as the LLM4TG rendering.
std::string write_standard(const TransactionGraph& g, StandardFormat format);

/// Throws FormatError on malformed input and MissingAttribute when a node
/// lacks its `type`.
TransactionGraph read_standard_text(std::string_view text, StandardFormat format,
                                    std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound);

TransactionGraph read_standard(const std::filesystem::path& path, StandardFormat format,
                               std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound);

}  // namespace llm4tg::io
