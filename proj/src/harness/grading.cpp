#include "llm4tg/harness/grading.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "llm4tg/errors.hpp"

namespace llm4tg::harness {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_noise = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '`' || c == '"' || c == '\'';
  };
  while (!s.empty() && is_noise(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_noise(s.back())) s.remove_suffix(1);
  return s;
}

// key -> first answer given for it
std::map<std::string, std::string> answer_lines(std::string_view response) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t end = response.find('\n', pos);
    if (end == std::string_view::npos) end = response.size();
    std::string_view line = response.substr(pos, end - pos);
    pos = end + 1;

    line = trim(line);
    while (!line.empty() && (line.front() == '-' || line.front() == '*' || line.front() == '#')) {
      line = trim(line.substr(1));
    }
    const std::size_t sep = line.find_first_of(":=");
    if (sep == std::string_view::npos) continue;
    std::string_view key = trim(line.substr(0, sep));
    if (key.size() >= 2 && key.front() == '[' && key.back() == ']') {
      key = trim(key.substr(1, key.size() - 2));
    }
    out.emplace(lower(key), std::string(trim(line.substr(sep + 1))));
  }
  return out;
}

std::optional<NodeId> first_node_id(std::string_view text) {
  const std::string low = lower(text);
  for (std::size_t at = low.find("n_"); at != std::string::npos; at = low.find("n_", at + 1)) {
    if (at > 0 && std::isalnum(static_cast<unsigned char>(low[at - 1]))) continue;
    std::size_t end = at + 2;
    while (end < low.size() && std::isdigit(static_cast<unsigned char>(low[end]))) ++end;
    if (auto id = NodeId::parse(std::string_view(low).substr(at, end - at))) return id;
  }
  return std::nullopt;
}

std::optional<double> first_number(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (c != ',') cleaned += c;
  }
  for (std::size_t i = 0; i < cleaned.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(cleaned[i]))) continue;
    std::size_t start = i;
    if (start > 0 && (cleaned[start - 1] == '-' || cleaned[start - 1] == '.')) --start;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cleaned.data() + start, cleaned.data() + cleaned.size(), v);
    if (ec == std::errc{} && std::isfinite(v)) return v;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<bool> yes_no(std::string_view text) {
  std::string word;
  for (char c : lower(text)) {
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      if (!word.empty()) break;
      continue;
    }
    word += c;
  }
  if (word == "yes" || word == "true") return true;
  if (word == "no" || word == "false") return false;
  return std::nullopt;
}

bool close_enough(double answer, double expected) {
  const double scale = std::abs(expected);
  if (scale == 0.0) return std::abs(answer) <= kRelativeTolerance;
  return std::abs(answer - expected) <= kRelativeTolerance * scale;
}

oracle::GlobalMetric global_of(Level1Metric m) {
  return static_cast<oracle::GlobalMetric>(static_cast<int>(m));
}

oracle::NodeMetric node_of(Level1Metric m) {
  return static_cast<oracle::NodeMetric>(static_cast<int>(m) - static_cast<int>(Level1Metric::NodeInDegree));
}

// Expected numeric value or membership flag; nullopt when the key has no
// entry for the question.
std::optional<double> expected_number(const Level1Question& q, const oracle::AnswerKey& key) {
  if (!q.node) return std::nullopt;
  if (q.metric == Level1Metric::NodeSpecialInfoA) {
    auto it = key.special_a.find(*q.node);
    if (it == key.special_a.end()) return std::nullopt;
    return static_cast<double>(it->second);
  }
  auto it = key.node_values.find({*q.node, node_of(q.metric)});
  if (it == key.node_values.end()) return std::nullopt;
  return oracle::as_double(it->second);
}

std::optional<bool> expected_membership(const Level1Question& q, const oracle::AnswerKey& key) {
  if (!q.node || !q.query || !key.special_t.contains(*q.node)) return std::nullopt;
  return key.contains(*q.node, *q.query, q.direction);
}

}  // namespace

bool Level1Grade::family_correct(Level1Metric m) const {
  const auto i = static_cast<std::size_t>(m);
  return asked[i] > 0 && correct[i] == asked[i];
}

std::size_t Level1Grade::families_asked() const {
  return static_cast<std::size_t>(std::count_if(asked.begin(), asked.end(), [](std::size_t n) { return n > 0; }));
}

std::size_t Level1Grade::families_correct() const {
  std::size_t n = 0;
  for (Level1Metric m : kLevel1Metrics) n += family_correct(m) ? 1 : 0;
  return n;
}

std::string expected_answer(const Level1Question& q, const oracle::AnswerKey& key) {
  if (is_global(q.metric)) {
    auto it = key.global.find(global_of(q.metric));
    return it == key.global.end() || it->second.empty() ? std::string() : it->second.front().str();
  }
  if (q.metric == Level1Metric::NodeSpecialInfoT) {
    const auto m = expected_membership(q, key);
    return m ? (*m ? "yes" : "no") : std::string();
  }
  if (!q.node) return {};
  if (q.metric == Level1Metric::NodeSpecialInfoA) {
    auto it = key.special_a.find(*q.node);
    return it == key.special_a.end() ? std::string() : std::to_string(it->second);
  }
  auto it = key.node_values.find({*q.node, node_of(q.metric)});
  return it == key.node_values.end() ? std::string() : oracle::to_string(it->second);
}

std::string perfect_response(std::span<const Level1Question> node_questions, const oracle::AnswerKey& key) {
  std::string out;
  for (const Level1Question& q : full_battery(node_questions)) {
    out += q.key() + ": " + expected_answer(q, key) + "\n";
  }
  return out;
}

Level1Grade grade_level1(std::string_view response, std::span<const Level1Question> node_questions,
                         const oracle::AnswerKey& key) {
  Level1Grade grade;
  const auto answers = answer_lines(response);
  grade.struct_correctness = true;
  for (const Level1Question& q : full_battery(node_questions)) {
    QuestionGrade qg;
    qg.key = q.key();
    qg.metric = q.metric;
    qg.expected = expected_answer(q, key);
    if (auto it = answers.find(lower(qg.key)); it != answers.end()) {
      qg.answer = it->second;
      const std::string& a = it->second;
      if (is_global(q.metric)) {
        if (auto id = first_node_id(a)) {
          qg.parsed = true;
          qg.correct = key.is_argmax(global_of(q.metric), *id);
        }
      } else if (q.metric == Level1Metric::NodeSpecialInfoT) {
        if (auto b = yes_no(a)) {
          qg.parsed = true;
          const auto truth = expected_membership(q, key);
          qg.correct = truth && *truth == *b;
        }
      } else if (auto v = first_number(a)) {
        qg.parsed = true;
        const auto truth = expected_number(q, key);
        qg.correct = truth && close_enough(*v, *truth);
      }
    }
    grade.struct_correctness = grade.struct_correctness && qg.parsed;
    const auto i = static_cast<std::size_t>(q.metric);
    ++grade.asked[i];
    grade.correct[i] += qg.correct ? 1 : 0;
    grade.questions.push_back(std::move(qg));
  }
  return grade;
}

nlohmann::json to_json(const Level1Grade& grade) {
  nlohmann::json j;
  j["struct_correctness"] = grade.struct_correctness;
  j["families_correct"] = grade.families_correct();
  j["families_asked"] = grade.families_asked();
  nlohmann::json families = nlohmann::json::object();
  for (Level1Metric m : kLevel1Metrics) {
    const auto i = static_cast<std::size_t>(m);
    families[std::string(to_string(m))] = {{"asked", grade.asked[i]}, {"correct", grade.correct[i]}};
  }
  j["families"] = families;
  nlohmann::json questions = nlohmann::json::array();
  for (const QuestionGrade& q : grade.questions) {
    questions.push_back({{"key", q.key},
                         {"answer", q.answer ? nlohmann::json(*q.answer) : nlohmann::json()},
                         {"expected", q.expected},
                         {"parsed", q.parsed},
                         {"correct", q.correct}});
  }
  j["questions"] = questions;
  return j;
}

}  // namespace llm4tg::harness
