#include "llm4tg/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "llm4tg/errors.hpp"

namespace llm4tg::features {

namespace {

constexpr FeatureDescriptor kDescriptors[] = {
    {"S2-2", "Maximum out-degree in subgraphs"},
    {"S1-6", "Standard deviation of in- and out-degree in subgraphs"},
    {"S1-2", "Standard deviation of in-degree in subgraphs"},
    {"S3", "Degree correlation of subgraphs"},
    {"PAIa21-1",
     "Ratio of the minimum input token amount of an address node to the total input token amount of the "
     "address node"},
    {"PTIa41-2", "Minimum transaction time interval of an address node"},
    {"S6", "Longest distance between any two nodes in the subgraph"},
    {"S5", "Closeness centrality of the subgraph"},
    {"CI3a32-2",
     "Maximum change ratio in in-degree to each transaction time interval for the address node in "
     "chronological order"},
    {"S7", "Density of the subgraph"},
};

double population_std(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// A transaction touching the root: when it happened, and how much it paid
// the root (absent for purely outgoing transactions).
struct RootActivity {
  std::optional<std::int64_t> timestamp;
  std::optional<Amount> received;
  bool incoming = false;
  bool amount_known = true;
};

std::vector<RootActivity> activity_from_records(std::span<const io::RawTxRecord> records,
                                                const std::string& root_address) {
  std::vector<RootActivity> out;
  for (const io::RawTxRecord& r : records) {
    RootActivity a;
    bool touches = false;
    for (const io::TxLeg& leg : r.inputs) touches |= leg.address == root_address;
    for (const io::TxLeg& leg : r.outputs) {
      if (leg.address == root_address) {
        touches = true;
        a.incoming = true;
        a.received = a.received.value_or(Amount{}) + leg.amount;
      }
    }
    if (touches) {
      a.timestamp = r.timestamp;
      out.push_back(a);
    }
  }
  return out;
}

std::vector<RootActivity> activity_from_graph(const TransactionGraph& g) {
  std::map<std::uint32_t, RootActivity> by_tx;
  const NodeId root = g.root();
  for (const Edge& e : g.edges()) {
    if (e.from == root) {
      RootActivity& a = by_tx[e.to.value];
      a.timestamp = g.node(e.to).timestamp;
    } else if (e.to == root) {
      RootActivity& a = by_tx[e.from.value];
      a.timestamp = g.node(e.from).timestamp;
      a.incoming = true;
      if (e.value) {
        a.received = *e.value;
      } else {
        a.amount_known = false;
      }
    }
  }
  std::vector<RootActivity> out;
  for (auto& [id, a] : by_tx) out.push_back(a);
  return out;
}

}  // namespace

std::span<const FeatureDescriptor> descriptors() { return kDescriptors; }

std::uint32_t diameter(const TransactionGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::uint32_t> dist(n);
  std::vector<std::uint32_t> queue(n);
  std::uint32_t best = 0;
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    std::size_t head = 0, tail = 0;
    queue[tail++] = static_cast<std::uint32_t>(s);
    dist[s] = 0;
    while (head < tail) {
      const std::uint32_t at = queue[head++];
      best = std::max(best, dist[at]);
      for (std::uint32_t next : g.neighbors(at)) {
        if (dist[next] == kUnseen) {
          dist[next] = dist[at] + 1;
          queue[tail++] = next;
        }
      }
    }
  }
  return best;
}

FeatureVector compute_features(const TransactionGraph& g, std::span<const io::RawTxRecord> records,
                               bool require_temporal) {
  FeatureVector v;
  const std::size_t n = g.size();

  std::vector<double> in_deg, total_deg;
  in_deg.reserve(n);
  total_deg.reserve(n);
  for (const Node& node : g.nodes()) {
    v.s2_2 = std::max(v.s2_2, node.out_degree_or0());
    in_deg.push_back(static_cast<double>(node.in_degree_or0()));
    total_deg.push_back(static_cast<double>(node.in_degree_or0() + node.out_degree_or0()));
  }
  v.s1_2 = population_std(in_deg);
  v.s1_6 = population_std(total_deg);

  std::vector<double> src_out, dst_in;
  src_out.reserve(g.edges().size());
  dst_in.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    src_out.push_back(static_cast<double>(g.node(e.from).out_degree_or0()));
    dst_in.push_back(static_cast<double>(g.node(e.to).in_degree_or0()));
  }
  v.s3 = pearson(src_out, dst_in);

  v.s6 = diameter(g);
  if (n > 1) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += g.layer_at(i);
    v.s5 = static_cast<double>(n - 1) / total;
    v.s7 = static_cast<double>(g.edges().size()) / (static_cast<double>(n) * static_cast<double>(n - 1));
  }

  std::vector<RootActivity> activity;
  if (!records.empty()) {
    const Node& root = g.node(g.root());
    if (!root.original_id) {
      throw std::invalid_argument("records given but the root has no original address");
    }
    activity = activity_from_records(records, *root.original_id);
  } else {
    activity = activity_from_graph(g);
  }

  // Incoming amount ratio.
  bool amounts_known = true;
  std::optional<Amount> min_in;
  Amount total_in;
  for (const RootActivity& a : activity) {
    if (!a.incoming) continue;
    if (!a.amount_known || !a.received) {
      amounts_known = false;
      continue;
    }
    total_in += *a.received;
    min_in = min_in ? std::min(*min_in, *a.received) : *a.received;
  }
  if (amounts_known) {
    v.paia21_1 = (!min_in || total_in.units() == 0)
                     ? 0.0
                     : static_cast<double>(min_in->units()) / static_cast<double>(total_in.units());
  }

  // Timing.
  std::vector<std::int64_t> all_times;
  std::vector<std::int64_t> incoming_times;
  for (const RootActivity& a : activity) {
    if (!a.timestamp) continue;
    all_times.push_back(*a.timestamp);
    if (a.incoming) incoming_times.push_back(*a.timestamp);
  }
  if (require_temporal && all_times.empty()) {
    throw MissingTimestamps("no timestamps available for the root's transactions");
  }
  std::sort(all_times.begin(), all_times.end());
  std::sort(incoming_times.begin(), incoming_times.end());
  if (all_times.size() >= 2) {
    std::int64_t gap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 1; i < all_times.size(); ++i) gap = std::min(gap, all_times[i] - all_times[i - 1]);
    v.ptia41_2 = gap;
  }
  if (incoming_times.size() >= 2) {
    // Each incoming transaction raises the root's in-degree by one.
    double best = 0.0;
    for (std::size_t i = 1; i < incoming_times.size(); ++i) {
      const std::int64_t gap = std::max<std::int64_t>(incoming_times[i] - incoming_times[i - 1], 1);
      best = std::max(best, 1.0 / static_cast<double>(gap));
    }
    v.ci3a32_2 = best;
  }
  return v;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

std::vector<std::optional<std::string>> rendered_values(const FeatureVector& v) {
  auto real = [](std::optional<double> x) -> std::optional<std::string> {
    if (!x) return std::nullopt;
    return format_real(*x);
  };
  return {
      std::to_string(v.s2_2),
      format_real(v.s1_6),
      format_real(v.s1_2),
      real(v.s3),
      real(v.paia21_1),
      v.ptia41_2 ? std::optional<std::string>(std::to_string(*v.ptia41_2)) : std::nullopt,
      std::to_string(v.s6),
      format_real(v.s5),
      real(v.ci3a32_2),
      format_real(v.s7),
  };
}

}  // namespace

std::string feature_prompt_block(const FeatureVector& v, std::optional<Category> label) {
  std::string out;
  const auto values = rendered_values(v);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    out += kDescriptors[i].description;
    out += ": ";
    out += *values[i];
    out += '\n';
  }
  if (label) {
    out += "category: ";
    out += to_string(*label);
    out += '\n';
  }
  return out;
}

std::string csv_header() {
  std::string out = "graph_id";
  for (const auto& d : kDescriptors) {
    out += ',';
    out += d.label;
  }
  return out + '\n';
}

std::string csv_row(std::string_view graph_id, const FeatureVector& v) {
  std::string out(graph_id);
  for (const auto& value : rendered_values(v)) {
    out += ',';
    if (value) out += *value;
  }
  return out + '\n';
}

}  // namespace llm4tg::features
