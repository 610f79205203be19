#include "llm4tg/io/graph_file.hpp"

#include "llm4tg/errors.hpp"
#include "llm4tg/io/llm4tg_codec.hpp"
#include "llm4tg/io/standard_formats.hpp"
#include "llm4tg/util/atomic_file.hpp"

namespace llm4tg::io {

std::string_view to_string(GraphFormat f) {
  switch (f) {
    case GraphFormat::Llm4tg: return "tg";
    case GraphFormat::GraphML: return "graphml";
    case GraphFormat::Gexf: return "gexf";
    case GraphFormat::Gml: return "gml";
    case GraphFormat::Csv: return "csv";
  }
  return "unknown";
}

std::optional<GraphFormat> parse_graph_format(std::string_view name) {
  if (name == "tg" || name == "llm4tg") return GraphFormat::Llm4tg;
  if (name == "graphml") return GraphFormat::GraphML;
  if (name == "gexf") return GraphFormat::Gexf;
  if (name == "gml") return GraphFormat::Gml;
  if (name == "csv") return GraphFormat::Csv;
  return std::nullopt;
}

std::optional<GraphFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  if (ext.empty()) return std::nullopt;
  return parse_graph_format(std::string_view(ext).substr(1));
}

namespace {

StandardFormat standard_of(GraphFormat f) {
  switch (f) {
    case GraphFormat::GraphML: return StandardFormat::GraphML;
    case GraphFormat::Gexf: return StandardFormat::Gexf;
    case GraphFormat::Gml: return StandardFormat::Gml;
    default: throw FormatError("not a standard graph format: " + std::string(to_string(f)));
  }
}

}  // namespace

TransactionGraph load_graph(const std::filesystem::path& path, std::optional<GraphFormat> format,
                            const LoadOptions& options) {
  if (!format) {
    format = format_from_extension(path);
    if (!format) {
      throw FormatError("cannot infer the format of " + path.string());
    }
  }
  if (!std::filesystem::is_regular_file(path)) {
    throw FormatError("no such file: " + path.string());
  }
  switch (*format) {
    case GraphFormat::Llm4tg:
      return parse_llm4tg(util::read_file(path), options.hop_bound);
    case GraphFormat::Csv: {
      if (options.root_address.empty()) {
        throw FormatError("raw record input needs a root address");
      }
      const auto records = read_raw_records(path);
      return ingest_raw(records, options.root_address, options.hop_bound, options.node_cap);
    }
    default:
      return read_standard(path, standard_of(*format), options.hop_bound);
  }
}

std::string render_graph(const TransactionGraph& g, GraphFormat format) {
  if (format == GraphFormat::Llm4tg) {
    return serialize_llm4tg(g).text;
  }
  if (format == GraphFormat::Csv) {
    throw FormatError("graphs cannot be written as raw records");
  }
  return write_standard(g, standard_of(format));
}

}  // namespace llm4tg::io
