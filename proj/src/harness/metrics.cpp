#include "llm4tg/harness/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "llm4tg/errors.hpp"

namespace llm4tg::harness {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassificationMetrics classification_metrics(std::span<const Category> truths,
                                             std::span<const std::vector<Category>> predictions,
                                             std::span<const Category> label_set) {
  if (truths.size() != predictions.size()) {
    throw LengthMismatch(std::to_string(truths.size()) + " truths but " + std::to_string(predictions.size()) +
                         " predictions");
  }
  if (truths.empty()) {
    throw std::invalid_argument("classification metrics need at least one prediction");
  }
  std::map<Category, std::size_t> tp, fp, fn;
  std::size_t hits = 0;
  std::size_t top3_hits = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const auto& ranked = predictions[i];
    const std::size_t depth = std::min<std::size_t>(ranked.size(), 3);
    if (std::find(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(depth), truths[i]) !=
        ranked.begin() + static_cast<std::ptrdiff_t>(depth)) {
      ++top3_hits;
    }
    if (!ranked.empty() && ranked.front() == truths[i]) {
      ++hits;
      ++tp[truths[i]];
    } else {
      ++fn[truths[i]];
      if (!ranked.empty()) ++fp[ranked.front()];
    }
  }

  ClassificationMetrics m;
  m.accuracy = ratio(hits, truths.size());
  m.top3_accuracy = ratio(top3_hits, truths.size());
  for (Category c : label_set) {
    CategoryScores s;
    s.precision = ratio(tp[c], tp[c] + fp[c]);
    s.recall = ratio(tp[c], tp[c] + fn[c]);
    s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    s.support = tp[c] + fn[c];
    m.macro_precision += s.precision;
    m.macro_recall += s.recall;
    m.macro_f1 += s.f1;
    m.per_category[c] = s;
  }
  const double k = static_cast<double>(label_set.size());
  if (k > 0) {
    m.macro_precision /= k;
    m.macro_recall /= k;
    m.macro_f1 /= k;
  }
  return m;
}

}  // namespace llm4tg::harness
