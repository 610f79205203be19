#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace llm4tg::harness {

/// One prompt/response/grade triple.
struct EvalRecord {
  int level = 1;
  std::string graph_id;
  std::string prompt;
  std::string response;
  nlohmann::json parsed;                // level-specific parsed answer
  std::optional<nlohmann::json> grade;  // absent until graded
  std::string model;
  std::string timestamp;  // ISO-8601 UTC

  bool operator==(const EvalRecord&) const = default;
};

nlohmann::json to_json(const EvalRecord& r);
/// Throws nlohmann::json::exception on a malformed object.
EvalRecord record_from_json(const nlohmann::json& j);

std::string utc_timestamp();

/// Append-only JSON-lines writer. Each record is written as one line and
/// flushed before write() returns.
class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);
  void write(const EvalRecord& record);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

/// Reads every complete record; torn or malformed lines are skipped. A
/// missing file yields no records.
std::vector<EvalRecord> load_records(const std::filesystem::path& path);

}  // namespace llm4tg::harness
