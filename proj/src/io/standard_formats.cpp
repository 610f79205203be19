#include "llm4tg/io/standard_formats.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

#include "llm4tg/errors.hpp"

namespace llm4tg::io {

namespace pt = boost::property_tree;

namespace {

// Attribute table shared by all three writers, in output order.
std::vector<std::pair<std::string_view, std::string>> node_attributes(const Node& n) {
  std::vector<std::pair<std::string_view, std::string>> out;
  out.emplace_back("type", std::string(to_string(n.type)));
  if (n.in_degree) out.emplace_back("in_degree", std::to_string(*n.in_degree));
  if (n.out_degree) out.emplace_back("out_degree", std::to_string(*n.out_degree));
  if (n.in_value) out.emplace_back("in_value", n.in_value->to_string());
  if (n.out_value) out.emplace_back("out_value", n.out_value->to_string());
  if (n.time_range) out.emplace_back("time_range", std::to_string(*n.time_range));
  return out;
}

struct AttributeSpec {
  std::string_view name;
  std::string_view graphml_type;
  std::string_view gexf_type;
};

constexpr AttributeSpec kAttributes[] = {
    {"type", "string", "string"},     {"in_degree", "long", "long"},   {"out_degree", "long", "long"},
    {"in_value", "double", "double"}, {"out_value", "double", "double"}, {"time_range", "long", "long"},
};

std::vector<Edge> canonical_edges(const TransactionGraph& g) {
  std::vector<Edge> out;
  out.reserve(g.edges().size());
  for (const Node& n : g.nodes()) {
    if (!n.is_transaction()) continue;
    for (NodeId src : n.in_nodes) out.push_back({src, n.id, std::nullopt});
    for (NodeId dst : n.out_nodes) out.push_back({n.id, dst, std::nullopt});
  }
  return out;
}

std::string write_graphml(const TransactionGraph& g) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  for (const auto& spec : kAttributes) {
    out += "  <key id=\"";
    out += spec.name;
    out += "\" for=\"node\" attr.name=\"";
    out += spec.name;
    out += "\" attr.type=\"";
    out += spec.graphml_type;
    out += "\"/>\n";
  }
  out += "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (const Node& n : g.nodes()) {
    out += "    <node id=\"" + n.id.str() + "\">\n";
    for (const auto& [key, value] : node_attributes(n)) {
      out += "      <data key=\"";
      out += key;
      out += "\">" + value + "</data>\n";
    }
    out += "    </node>\n";
  }
  for (const Edge& e : canonical_edges(g)) {
    out += "    <edge source=\"" + e.from.str() + "\" target=\"" + e.to.str() + "\"/>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string write_gexf(const TransactionGraph& g) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n";
  out += "  <graph defaultedgetype=\"directed\" mode=\"static\">\n";
  out += "    <attributes class=\"node\" mode=\"static\">\n";
  std::map<std::string_view, std::size_t> attr_index;
  for (std::size_t i = 0; i < std::size(kAttributes); ++i) {
    attr_index[kAttributes[i].name] = i;
    out += "      <attribute id=\"" + std::to_string(i) + "\" title=\"";
    out += kAttributes[i].name;
    out += "\" type=\"";
    out += kAttributes[i].gexf_type;
    out += "\"/>\n";
  }
  out += "    </attributes>\n    <nodes>\n";
  for (const Node& n : g.nodes()) {
    out += "      <node id=\"" + n.id.str() + "\" label=\"" + n.id.str() + "\">\n";
    out += "        <attvalues>\n";
    for (const auto& [key, value] : node_attributes(n)) {
      out += "          <attvalue for=\"" + std::to_string(attr_index[key]) + "\" value=\"" + value + "\"/>\n";
    }
    out += "        </attvalues>\n      </node>\n";
  }
  out += "    </nodes>\n    <edges>\n";
  std::size_t edge_no = 0;
  for (const Edge& e : canonical_edges(g)) {
    out += "      <edge id=\"" + std::to_string(edge_no++) + "\" source=\"" + e.from.str() + "\" target=\"" +
           e.to.str() + "\"/>\n";
  }
  out += "    </edges>\n  </graph>\n</gexf>\n";
  return out;
}

std::string write_gml(const TransactionGraph& g) {
  std::string out = "graph [\n  directed 1\n";
  for (const Node& n : g.nodes()) {
    out += "  node [\n    id " + std::to_string(n.id.value) + "\n    label \"" + n.id.str() + "\"\n";
    for (const auto& [key, value] : node_attributes(n)) {
      out += "    ";
      out += key;
      out += key == "type" ? " \"" + value + "\"\n" : " " + value + "\n";
    }
    out += "  ]\n";
  }
  for (const Edge& e : canonical_edges(g)) {
    out += "  edge [\n    source " + std::to_string(e.from.value) + "\n    target " +
           std::to_string(e.to.value) + "\n  ]\n";
  }
  out += "]\n";
  return out;
}

/// Node under construction while reading: id plus raw attribute text.
struct RawNode {
  NodeId id;
  std::map<std::string, std::string> attrs;
};

template <typename T>
T parse_integer(const std::string& text, const RawNode& n, std::string_view attr) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("node " + n.id.str() + ": attribute '" + std::string(attr) + "' is not an integer: '" +
                      text + "'");
  }
  return value;
}

TransactionGraph assemble(std::vector<RawNode> raw, std::vector<Edge> edges, std::uint32_t hop_bound) {
  std::vector<Node> nodes;
  nodes.reserve(raw.size());
  std::map<std::uint32_t, bool> known;
  for (const RawNode& r : raw) {
    Node n;
    n.id = r.id;
    auto type_it = r.attrs.find("type");
    if (type_it == r.attrs.end()) {
      throw MissingAttribute("node " + r.id.str() + " is missing attribute 'type'");
    }
    if (type_it->second == "address") {
      n.type = NodeType::Address;
    } else if (type_it->second == "transaction") {
      n.type = NodeType::Transaction;
    } else {
      throw FormatError("node " + r.id.str() + ": unknown type '" + type_it->second + "'");
    }
    for (const auto& [key, value] : r.attrs) {
      if (key == "type") {
        continue;
      } else if (key == "in_degree") {
        n.in_degree = parse_integer<std::uint64_t>(value, r, key);
      } else if (key == "out_degree") {
        n.out_degree = parse_integer<std::uint64_t>(value, r, key);
      } else if (key == "in_value" || key == "out_value") {
        auto amount = Amount::try_parse(value);
        if (!amount) {
          throw FormatError("node " + r.id.str() + ": attribute '" + key + "' is not an amount: '" + value + "'");
        }
        (key == "in_value" ? n.in_value : n.out_value) = *amount;
      } else if (key == "time_range") {
        n.time_range = parse_integer<std::uint64_t>(value, r, key);
      }
    }
    known[n.id.value] = true;
    nodes.push_back(std::move(n));
  }
  for (const Edge& e : edges) {
    if (!known.contains(e.from.value) || !known.contains(e.to.value)) {
      throw FormatError("edge " + e.from.str() + "->" + e.to.str() + " references an undefined node");
    }
  }
  return build_graph(std::move(nodes), std::move(edges), kRootId, hop_bound);
}

NodeId require_node_id(const std::string& text) {
  auto id = NodeId::parse(text);
  if (!id) {
    throw FormatError("node id '" + text + "' is not of the form n_<k>");
  }
  return *id;
}

pt::ptree parse_xml(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw FormatError(std::string("malformed XML: ") + e.what());
  }
  return tree;
}

const pt::ptree& child(const pt::ptree& tree, const std::string& path, std::string_view what) {
  auto found = tree.get_child_optional(path);
  if (!found) {
    throw FormatError("missing <" + std::string(what) + "> element");
  }
  return *found;
}

std::string xml_attr(const pt::ptree& element, const std::string& name, std::string_view element_name) {
  auto value = element.get_optional<std::string>("<xmlattr>." + name);
  if (!value) {
    throw FormatError("<" + std::string(element_name) + "> without '" + name + "' attribute");
  }
  return *value;
}

TransactionGraph read_graphml(std::string_view text, std::uint32_t hop_bound) {
  const pt::ptree tree = parse_xml(text);
  const pt::ptree& root = child(tree, "graphml", "graphml");
  std::map<std::string, std::string> key_names;
  for (const auto& [tag, element] : root) {
    if (tag == "key") {
      const std::string id = xml_attr(element, "id", "key");
      key_names[id] = element.get<std::string>("<xmlattr>.attr.name", id);
    }
  }
  const pt::ptree& graph = child(root, "graph", "graph");
  std::vector<RawNode> nodes;
  std::vector<Edge> edges;
  for (const auto& [tag, element] : graph) {
    if (tag == "node") {
      RawNode n;
      n.id = require_node_id(xml_attr(element, "id", "node"));
      for (const auto& [dtag, data] : element) {
        if (dtag != "data") continue;
        const std::string key = xml_attr(data, "key", "data");
        auto name = key_names.find(key);
        n.attrs[name == key_names.end() ? key : name->second] = data.get_value<std::string>();
      }
      nodes.push_back(std::move(n));
    } else if (tag == "edge") {
      edges.push_back({require_node_id(xml_attr(element, "source", "edge")),
                       require_node_id(xml_attr(element, "target", "edge")), std::nullopt});
    }
  }
  return assemble(std::move(nodes), std::move(edges), hop_bound);
}

TransactionGraph read_gexf(std::string_view text, std::uint32_t hop_bound) {
  const pt::ptree tree = parse_xml(text);
  const pt::ptree& graph = child(tree, "gexf.graph", "graph");
  std::map<std::string, std::string> titles;
  for (const auto& [tag, element] : graph) {
    if (tag != "attributes" || element.get<std::string>("<xmlattr>.class", "node") != "node") continue;
    for (const auto& [atag, attr] : element) {
      if (atag == "attribute") {
        titles[xml_attr(attr, "id", "attribute")] = xml_attr(attr, "title", "attribute");
      }
    }
  }
  std::vector<RawNode> nodes;
  std::vector<Edge> edges;
  if (auto node_list = graph.get_child_optional("nodes")) {
    for (const auto& [tag, element] : *node_list) {
      if (tag != "node") continue;
      RawNode n;
      n.id = require_node_id(xml_attr(element, "id", "node"));
      if (auto values = element.get_child_optional("attvalues")) {
        for (const auto& [vtag, value] : *values) {
          if (vtag != "attvalue") continue;
          const std::string key = xml_attr(value, "for", "attvalue");
          auto title = titles.find(key);
          n.attrs[title == titles.end() ? key : title->second] = xml_attr(value, "value", "attvalue");
        }
      }
      nodes.push_back(std::move(n));
    }
  }
  if (auto edge_list = graph.get_child_optional("edges")) {
    for (const auto& [tag, element] : *edge_list) {
      if (tag != "edge") continue;
      edges.push_back({require_node_id(xml_attr(element, "source", "edge")),
                       require_node_id(xml_attr(element, "target", "edge")), std::nullopt});
    }
  }
  return assemble(std::move(nodes), std::move(edges), hop_bound);
}

// GML: key/value pairs where a value is a number, a quoted string or a
// bracketed list of further pairs.
struct GmlList;
using GmlValue = std::variant<std::string, std::shared_ptr<GmlList>>;
struct GmlList {
  std::vector<std::pair<std::string, GmlValue>> items;
};

class GmlParser {
 public:
  explicit GmlParser(std::string_view text) : text_(text) {}

  GmlList parse_document() {
    GmlList top = parse_items(false);
    return top;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      line += text_[i] == '\n';
    }
    throw FormatError("GML line " + std::to_string(line) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  GmlList parse_items(bool nested) {
    GmlList list;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        if (nested) fail("unterminated list");
        return list;
      }
      if (text_[pos_] == ']') {
        if (!nested) fail("unexpected ']'");
        ++pos_;
        return list;
      }
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      if (start == pos_) fail("expected a key");
      std::string key(text_.substr(start, pos_ - start));
      list.items.emplace_back(std::move(key), parse_value());
    }
  }

  GmlValue parse_value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    const char ch = text_[pos_];
    if (ch == '[') {
      ++pos_;
      return std::make_shared<GmlList>(parse_items(true));
    }
    if (ch == '"') {
      const std::size_t end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated string");
      std::string value(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return value;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ']' &&
           text_[pos_] != '[') {
      ++pos_;
    }
    if (start == pos_) fail("missing value");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

TransactionGraph read_gml(std::string_view text, std::uint32_t hop_bound) {
  GmlList top = GmlParser(text).parse_document();
  const GmlList* graph = nullptr;
  for (const auto& [key, value] : top.items) {
    if (key == "graph" && std::holds_alternative<std::shared_ptr<GmlList>>(value)) {
      graph = std::get<std::shared_ptr<GmlList>>(value).get();
    }
  }
  if (!graph) {
    throw FormatError("GML document has no graph list");
  }
  auto scalar = [](const GmlValue& v) -> const std::string* { return std::get_if<std::string>(&v); };

  std::map<std::string, NodeId> gml_ids;
  std::vector<RawNode> nodes;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  for (const auto& [key, value] : graph->items) {
    const auto* list = std::get_if<std::shared_ptr<GmlList>>(&value);
    if (!list) continue;
    if (key == "node") {
      RawNode n;
      std::optional<std::string> gml_id;
      std::optional<std::string> label;
      for (const auto& [k, v] : (*list)->items) {
        const std::string* s = scalar(v);
        if (!s) continue;
        if (k == "id") {
          gml_id = *s;
        } else if (k == "label") {
          label = *s;
        } else {
          n.attrs[k] = *s;
        }
      }
      if (!gml_id) throw FormatError("GML node without id");
      n.id = label ? require_node_id(*label) : require_node_id("n_" + *gml_id);
      if (!gml_ids.emplace(*gml_id, n.id).second) {
        throw FormatError("GML node id " + *gml_id + " defined twice");
      }
      nodes.push_back(std::move(n));
    } else if (key == "edge") {
      std::optional<std::string> source;
      std::optional<std::string> target;
      for (const auto& [k, v] : (*list)->items) {
        if (const std::string* s = scalar(v)) {
          if (k == "source") source = *s;
          if (k == "target") target = *s;
        }
      }
      if (!source || !target) throw FormatError("GML edge without source or target");
      raw_edges.emplace_back(*source, *target);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [s, t] : raw_edges) {
    auto from = gml_ids.find(s);
    auto to = gml_ids.find(t);
    if (from == gml_ids.end() || to == gml_ids.end()) {
      throw FormatError("GML edge " + s + "->" + t + " references an undefined node");
    }
    edges.push_back({from->second, to->second, std::nullopt});
  }
  return assemble(std::move(nodes), std::move(edges), hop_bound);
}

}  // namespace

std::string_view to_string(StandardFormat f) {
  switch (f) {
    case StandardFormat::GraphML: return "graphml";
    case StandardFormat::Gexf: return "gexf";
    case StandardFormat::Gml: return "gml";
  }
  return "unknown";
}

std::optional<StandardFormat> parse_standard_format(std::string_view name) {
  if (name == "graphml") return StandardFormat::GraphML;
  if (name == "gexf") return StandardFormat::Gexf;
  if (name == "gml") return StandardFormat::Gml;
  return std::nullopt;
}

std::string write_standard(const TransactionGraph& g, StandardFormat format) {
  switch (format) {
    case StandardFormat::GraphML: return write_graphml(g);
    case StandardFormat::Gexf: return write_gexf(g);
    case StandardFormat::Gml: return write_gml(g);
  }
  throw FormatError("unknown format");
}

TransactionGraph read_standard_text(std::string_view text, StandardFormat format, std::uint32_t hop_bound) {
  switch (format) {
    case StandardFormat::GraphML: return read_graphml(text, hop_bound);
    case StandardFormat::Gexf: return read_gexf(text, hop_bound);
    case StandardFormat::Gml: return read_gml(text, hop_bound);
  }
  throw FormatError("unknown format");
}

TransactionGraph read_standard(const std::filesystem::path& path, StandardFormat format, std::uint32_t hop_bound) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_standard_text(buffer.str(), format, hop_bound);
}

}  // namespace llm4tg::io
