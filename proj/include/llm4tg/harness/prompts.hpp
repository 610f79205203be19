#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "llm4tg/category.hpp"
#include "llm4tg/features.hpp"
#include "llm4tg/graph.hpp"
#include "llm4tg/io/llm4tg_codec.hpp"
#include "llm4tg/oracle.hpp"
#include "llm4tg/tokens/encoding.hpp"

namespace llm4tg::harness {

/// The twelve graded Level-1 metric families.
enum class Level1Metric {
  GlobalInDegree,
  GlobalOutDegree,
  GlobalInValue,
  GlobalOutValue,
  GlobalDiffDegree,
  GlobalDiffValue,
  NodeInDegree,
  NodeOutDegree,
  NodeInValue,
  NodeOutValue,
  NodeSpecialInfoA,
  NodeSpecialInfoT,
};

inline constexpr Level1Metric kLevel1Metrics[] = {
    Level1Metric::GlobalInDegree,   Level1Metric::GlobalOutDegree, Level1Metric::GlobalInValue,
    Level1Metric::GlobalOutValue,   Level1Metric::GlobalDiffDegree, Level1Metric::GlobalDiffValue,
    Level1Metric::NodeInDegree,     Level1Metric::NodeOutDegree,   Level1Metric::NodeInValue,
    Level1Metric::NodeOutValue,     Level1Metric::NodeSpecialInfoA, Level1Metric::NodeSpecialInfoT,
};

/// "global_in_degree", ..., "node_special_info_t".
std::string_view to_string(Level1Metric m);
std::optional<Level1Metric> parse_level1_metric(std::string_view name);
bool is_global(Level1Metric m);

struct Level1Question {
  Level1Metric metric = Level1Metric::GlobalInDegree;
  std::optional<NodeId> node;   // node questions
  std::optional<NodeId> query;  // special_info_t: the address asked about
  oracle::Direction direction = oracle::Direction::In;

  /// Answer-line key: "global_in_degree", "node_in_value@n_3",
  /// "node_special_info_t@n_1/in/n_0".
  std::string key() const;
  std::string text() const;

  bool operator==(const Level1Question&) const = default;
};

/// The six global questions.
std::vector<Level1Question> global_questions();

/// Node questions for one node per layer, chosen with `seed`. Every chosen
/// node gets the four attribute questions; addresses with a time_range get a
/// time_range question and transactions a membership question about one of
/// their neighbours.
std::vector<Level1Question> default_battery(const TransactionGraph& g, std::uint64_t seed);

/// Global questions followed by `node_questions`, without duplicates.
std::vector<Level1Question> full_battery(std::span<const Level1Question> node_questions);

/// Optional token check applied by the prompt builders.
struct PromptBudget {
  const tokens::Encoding* encoding = nullptr;
  std::size_t limit = 0;
};

/// Embeds `doc` and the full battery. Throws UnknownNodeInQuestion when a
/// question names a node the document does not define, and BudgetExceeded
/// when the prompt is over budget.
std::string build_prompt_level1(const io::Llm4tgDocument& doc, std::span<const Level1Question> node_questions,
                                std::optional<PromptBudget> budget = std::nullopt);

/// References are shown without labels. Throws std::invalid_argument when
/// `references` is empty and BudgetExceeded when over budget.
std::string build_prompt_level2(std::span<const io::Llm4tgDocument> references, const io::Llm4tgDocument& target,
                                std::optional<PromptBudget> budget = std::nullopt);

enum class Level3Mode { Raw, Features };

std::string_view to_string(Level3Mode m);
std::optional<Level3Mode> parse_level3_mode(std::string_view name);

/// A graph rendered as LLM4TG (raw mode) or its feature vector.
using Level3Input = std::variant<io::Llm4tgDocument, features::FeatureVector>;

struct Level3Reference {
  Level3Input input;
  Category label;
};

/// Labelled references, the unlabelled target, the eight categories and a
/// ranked top-3 answer layout. Throws MixedMode when an input does not
/// match `mode`, std::invalid_argument without references, and
/// BudgetExceeded when over budget.
std::string build_prompt_level3(std::span<const Level3Reference> references, const Level3Input& target,
                                Level3Mode mode, std::optional<PromptBudget> budget = std::nullopt);

/// Opening line of each embedded graph block, e.g. "[graph reference 1]".
inline constexpr std::string_view kBlockMarker = "[graph ";

}  // namespace llm4tg::harness
