#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "llm4tg/category.hpp"

namespace llm4tg::harness {

/// Extracts up to three ranked categories from a Level-3 response. Numbered
/// items ("1. ...", "2) ...") are read in order and each contributes the
/// first category it mentions; without numbering the whole text is scanned.
/// Spellings are normalized through synonyms and single-edit typos.
/// Throws NoParsableLabels when no category is found.
std::vector<Category> parse_ranked_labels(std::string_view response);

/// Maps one word or phrase to a category, if it names one.
std::optional<Category> normalize_category(std::string_view text);

}  // namespace llm4tg::harness
