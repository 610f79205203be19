#include "llm4tg/harness/records.hpp"

#include <chrono>
#include <ctime>

#include "llm4tg/errors.hpp"

namespace llm4tg::harness {

nlohmann::json to_json(const EvalRecord& r) {
  nlohmann::json j;
  j["level"] = r.level;
  j["graph_id"] = r.graph_id;
  j["model"] = r.model;
  j["timestamp"] = r.timestamp;
  j["prompt"] = r.prompt;
  j["response"] = r.response;
  j["parsed"] = r.parsed;
  j["grade"] = r.grade ? *r.grade : nlohmann::json();
  return j;
}

EvalRecord record_from_json(const nlohmann::json& j) {
  EvalRecord r;
  r.level = j.at("level").get<int>();
  r.graph_id = j.at("graph_id").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.prompt = j.at("prompt").get<std::string>();
  r.response = j.at("response").get<std::string>();
  r.parsed = j.at("parsed");
  if (const auto& g = j.at("grade"); !g.is_null()) r.grade = g;
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RecordWriter::RecordWriter(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  bool torn_tail = false;
  if (std::ifstream existing(path, std::ios::binary | std::ios::ate); existing && existing.tellg() > 0) {
    existing.seekg(-1, std::ios::end);
    torn_tail = existing.get() != '\n';
  }
  out_.open(path, std::ios::app | std::ios::binary);
  if (!out_) throw Error("cannot open " + path.string() + " for appending");
  // Terminate a line left unfinished by an interrupted run so the next
  // record starts on its own line.
  if (torn_tail) out_ << '\n';
}

void RecordWriter::write(const EvalRecord& record) {
  const std::string line = to_json(record).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) throw Error("failed to append record for " + record.graph_id);
}

std::vector<EvalRecord> load_records(const std::filesystem::path& path) {
  std::vector<EvalRecord> out;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      // torn write from an interrupted run
    }
  }
  return out;
}

}  // namespace llm4tg::harness
