#pragma once

#include <map>
#include <span>
#include <vector>

#include "llm4tg/category.hpp"

namespace llm4tg::harness {

struct CategoryScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  double top3_accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::map<Category, CategoryScores> per_category;
};

/// Rank-1 and top-3 scores. Macro averages run over every category in
/// `label_set`, including ones with no support; 0/0 counts as 0. An empty
/// prediction list is a miss. Throws LengthMismatch when the lists differ in
/// length and std::invalid_argument when they are empty.
ClassificationMetrics classification_metrics(std::span<const Category> truths,
                                             std::span<const std::vector<Category>> predictions,
                                             std::span<const Category> label_set = kAllCategories);

}  // namespace llm4tg::harness
