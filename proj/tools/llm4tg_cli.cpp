// llm4tg: convert, condense, measure and evaluate transaction graphs.
//
// Exit status: 0 success, 1 runtime failure, 2 usage/input errors,
// 3 graph too small to sample.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "llm4tg/cetras.hpp"
#include "llm4tg/errors.hpp"
#include "llm4tg/features.hpp"
#include "llm4tg/harness/runner.hpp"
#include "llm4tg/io/graph_file.hpp"
#include "llm4tg/io/ingest.hpp"
#include "llm4tg/oracle.hpp"
#include "llm4tg/tokens/encoding.hpp"
#include "llm4tg/tokens/format_report.hpp"
#include "llm4tg/util/atomic_file.hpp"

namespace {

using namespace llm4tg;

constexpr int kUsage = 2;
constexpr int kTooSmall = 3;

struct InputOptions {
  std::string from;
  std::string root_address;
  std::uint32_t hop_bound = TransactionGraph::kDefaultHopBound;
  std::size_t node_cap = io::kDefaultNodeCap;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--from", in.from, "Input format (tg, graphml, gexf, gml, csv); default from extension");
  cmd->add_option("--root-address", in.root_address, "Root address for CSV raw records");
  cmd->add_option("--hop-bound", in.hop_bound, "Maximum hops from the root")->capture_default_str();
  cmd->add_option("--node-cap", in.node_cap, "Node cap for CSV ingestion")->capture_default_str();
}

std::optional<io::GraphFormat> format_arg(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto f = io::parse_graph_format(name);
  if (!f) throw std::invalid_argument("unknown format '" + name + "'");
  return f;
}

TransactionGraph load(const std::string& path, const InputOptions& in) {
  io::LoadOptions opts;
  opts.hop_bound = in.hop_bound;
  opts.root_address = in.root_address;
  opts.node_cap = in.node_cap;
  return io::load_graph(path, format_arg(in.from), opts);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    util::write_file_atomic(out_path, text);
  }
}

std::string graph_id_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convert, condense, measure and evaluate Bitcoin transaction graphs"};
  app.require_subcommand(1);

  InputOptions in;

  std::string convert_in, convert_out, convert_to;
  auto* convert = app.add_subcommand("convert", "Convert a graph between formats");
  convert->add_option("input", convert_in, "Input file")->required();
  convert->add_option("output", convert_out, "Output file")->required();
  convert->add_option("--to", convert_to, "Output format; default from extension");
  add_input_options(convert, in);

  std::string sample_in, sample_out;
  std::size_t n_target = 0;
  std::uint64_t seed = 0;
  double beta = cetras::kDefaultBeta;
  auto* sample = app.add_subcommand("sample", "Condense a graph with importance-based sampling");
  sample->add_option("input", sample_in, "Input file")->required();
  sample->add_option("output", sample_out, "Output .tg file")->required();
  sample->add_option("-n,--n-target", n_target, "Nodes to select besides the root")->required();
  sample->add_option("--seed", seed, "Random seed")->required();
  sample->add_option("--beta", beta, "Degree weight in the importance score")->capture_default_str();
  add_input_options(sample, in);

  std::vector<std::string> token_inputs, models;
  std::string tokens_out;
  bool no_header = false;
  auto* tokens_cmd = app.add_subcommand("tokens", "Token counts of a graph in every format");
  tokens_cmd->add_option("inputs", token_inputs, "Input files")->required();
  tokens_cmd->add_option("-m,--model", models, "Model budgets to check (default gpt-3.5, deepseek, gpt-4)");
  tokens_cmd->add_option("-o,--out", tokens_out, "Write the CSV here instead of standard output");
  tokens_cmd->add_flag("--no-header", no_header, "Omit the CSV header");
  add_input_options(tokens_cmd, in);

  std::string oracle_in, oracle_out;
  auto* oracle_cmd = app.add_subcommand("oracle", "Dump the ground-truth answer key as JSON");
  oracle_cmd->add_option("input", oracle_in, "Input file")->required();
  oracle_cmd->add_option("-o,--out", oracle_out, "Write JSON here instead of standard output");
  add_input_options(oracle_cmd, in);

  std::vector<std::string> feature_inputs;
  std::string features_out, records_path;
  auto* features_cmd = app.add_subcommand("features", "Feature vectors as CSV, one row per graph");
  features_cmd->add_option("inputs", feature_inputs, "Input files")->required();
  features_cmd->add_option("--records", records_path, "Raw-record CSV for amount and timing features");
  features_cmd->add_option("-o,--out", features_out, "Write the CSV here instead of standard output");
  add_input_options(features_cmd, in);

  std::string manifest_path;
  std::size_t max_new = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Run an evaluation manifest");
  evaluate->add_option("manifest", manifest_path, "Manifest JSON file")->required();
  evaluate->add_option("--max-new-records", max_new, "Stop after this many new records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*convert) {
      const TransactionGraph g = load(convert_in, in);
      auto to = format_arg(convert_to);
      if (!to) to = io::format_from_extension(convert_out);
      if (!to) throw std::invalid_argument("cannot tell the output format of " + convert_out + "; pass --to");
      const std::string text = io::render_graph(g, *to);
      util::write_file_atomic(convert_out, text);
      std::cout << "nodes=" << g.size() << " edges=" << g.edges().size()
                << " tokens=" << tokens::count_tokens(text) << "\n";
    } else if (*sample) {
      const TransactionGraph g = load(sample_in, in);
      const auto start = std::chrono::steady_clock::now();
      const TransactionGraph s = cetras::sample(g, {n_target, seed, beta});
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      util::write_file_atomic(sample_out, io::render_graph(s, io::GraphFormat::Llm4tg));
      std::cout << "retained=" << s.size() << " input=" << g.size() << " elapsed_s=" << elapsed.count() << "\n";
    } else if (*tokens_cmd) {
      std::vector<tokens::TokenBudget> budgets;
      if (models.empty()) {
        budgets = tokens::default_budgets();
      } else {
        for (const std::string& m : models) budgets.push_back(tokens::budget_for(m));
      }
      std::string csv = no_header ? "" : tokens::report_csv_header(budgets);
      for (const std::string& path : token_inputs) {
        csv += tokens::report_csv_rows(tokens::compare_formats(load(path, in), budgets));
      }
      emit(tokens_out, csv);
    } else if (*oracle_cmd) {
      const TransactionGraph g = load(oracle_in, in);
      emit(oracle_out, oracle::to_json(oracle::answer_key(g)).dump(2) + "\n");
    } else if (*features_cmd) {
      std::vector<io::RawTxRecord> records;
      if (!records_path.empty()) records = io::read_raw_records(std::filesystem::path(records_path));
      std::string csv = features::csv_header();
      for (const std::string& path : feature_inputs) {
        csv += features::csv_row(graph_id_of(path), features::compute_features(load(path, in), records));
      }
      emit(features_out, csv);
    } else if (*evaluate) {
      const harness::Manifest m = harness::load_manifest(manifest_path);
      auto client = harness::make_client(m);
      harness::RunOptions opts;
      if (evaluate->count("--max-new-records") > 0) opts.max_new_records = max_new;
      const harness::RunResult r = harness::run_evaluation(m, *client, opts);
      std::cout << "written=" << r.written << " skipped=" << r.skipped << " failed=" << r.failed << "\n";
      return r.failed == 0 ? 0 : 1;
    }
  } catch (const SingleNodeGraph& e) {
    std::cerr << "llm4tg: " << e.what() << "\n";
    return kTooSmall;
  } catch (const EndpointError& e) {
    std::cerr << "llm4tg: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "llm4tg: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "llm4tg: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "llm4tg: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
