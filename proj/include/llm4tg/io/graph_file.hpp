#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "llm4tg/graph.hpp"
#include "llm4tg/io/ingest.hpp"

namespace llm4tg::io {

enum class GraphFormat { Llm4tg, GraphML, Gexf, Gml, Csv };

std::string_view to_string(GraphFormat f);
/// Accepts "tg"/"llm4tg", "graphml", "gexf", "gml", "csv".
std::optional<GraphFormat> parse_graph_format(std::string_view name);
std::optional<GraphFormat> format_from_extension(const std::filesystem::path& path);

struct LoadOptions {
  std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound;
  std::string root_address;  // CSV only
  std::size_t node_cap = kDefaultNodeCap;
};

/// Loads a graph file; the format defaults to the one implied by the
/// extension.
TransactionGraph load_graph(const std::filesystem::path& path, std::optional<GraphFormat> format = std::nullopt,
                            const LoadOptions& options = {});

/// Renders a graph in a writable format (everything but CSV).
std::string render_graph(const TransactionGraph& g, GraphFormat format);

}  // namespace llm4tg::io
