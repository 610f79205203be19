#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "llm4tg/category.hpp"
#include "llm4tg/harness/endpoint.hpp"
#include "llm4tg/harness/prompts.hpp"
#include "llm4tg/harness/records.hpp"
#include "llm4tg/io/graph_file.hpp"

namespace llm4tg::harness {

struct DatasetEntry {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory
  std::optional<io::GraphFormat> format;
  std::string root_address;  // CSV inputs
  std::optional<Category> label;
};

struct SamplingSettings {
  std::size_t n_target = 100;
  double beta = 2.0;
};

struct Manifest {
  int level = 1;
  Level3Mode mode = Level3Mode::Raw;
  std::uint64_t seed = 0;
  std::string endpoint_type;  // "http" or "mock"
  ModelEndpoint endpoint;
  std::map<std::string, std::string> mock_replies;
  std::string mock_default;
  std::vector<DatasetEntry> dataset;
  std::vector<DatasetEntry> references;
  std::optional<std::string> budget_model;
  std::optional<SamplingSettings> sample;
  std::filesystem::path output;
  std::filesystem::path summary;
  std::optional<std::filesystem::path> annotations;  // level 2 quality labels
};

/// Throws ManifestError on schema violations. Relative paths resolve
/// against `base_dir`.
Manifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

std::unique_ptr<ModelClient> make_client(const Manifest& m);

struct RunOptions {
  /// Stop after committing this many new records (simulated interrupt).
  std::optional<std::size_t> max_new_records;
};

struct RunResult {
  std::size_t skipped = 0;  // already recorded
  std::size_t written = 0;
  std::size_t failed = 0;   // endpoint errors; retried on the next run
};

/// Runs the manifest's level over every dataset entry not yet present in
/// the output file, appending records in dataset order, then rewrites the
/// summary CSV from all records on file.
RunResult run_evaluation(const Manifest& m, ModelClient& client, const RunOptions& options = {});

/// Summary CSV for the records of one level.
std::string summarize(const Manifest& m, const std::vector<EvalRecord>& records);

/// Seed for one dataset entry, stable across platforms.
std::uint64_t entry_seed(std::uint64_t seed, std::string_view graph_id);

}  // namespace llm4tg::harness
