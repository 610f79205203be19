#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "llm4tg/harness/prompts.hpp"
#include "llm4tg/oracle.hpp"

namespace llm4tg::harness {

inline constexpr double kRelativeTolerance = 1e-6;

struct QuestionGrade {
  std::string key;
  Level1Metric metric = Level1Metric::GlobalInDegree;
  std::optional<std::string> answer;  // raw answer text, absent if no line
  std::string expected;
  bool parsed = false;
  bool correct = false;
};

struct Level1Grade {
  /// Every required answer line is present and parses.
  bool struct_correctness = false;
  std::vector<QuestionGrade> questions;
  /// Per family: questions asked and answered correctly.
  std::array<std::size_t, 12> asked{};
  std::array<std::size_t, 12> correct{};

  bool family_correct(Level1Metric m) const;
  std::size_t families_asked() const;
  /// Families whose questions were all answered correctly.
  std::size_t families_correct() const;
};

/// Grades a response against the full battery for `node_questions`. Never
/// throws on response content.
Level1Grade grade_level1(std::string_view response, std::span<const Level1Question> node_questions,
                         const oracle::AnswerKey& key);

/// Correct-answer text for one question, as a perfect response would give it.
std::string expected_answer(const Level1Question& q, const oracle::AnswerKey& key);

/// A response answering every question correctly.
std::string perfect_response(std::span<const Level1Question> node_questions, const oracle::AnswerKey& key);

nlohmann::json to_json(const Level1Grade& grade);

}  // namespace llm4tg::harness
