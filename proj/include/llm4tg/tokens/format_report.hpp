#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llm4tg/graph.hpp"
#include "llm4tg/tokens/encoding.hpp"

namespace llm4tg::tokens {

/// Context-window limit of one model, in tokens.
struct TokenBudget {
  std::string model;
  std::size_t limit = 0;
};

/// gpt-3.5 (16,385), deepseek (64,000) and gpt-4 (128,000).
std::vector<TokenBudget> default_budgets();

/// Resolves a model name or alias ("gpt-3.5-turbo", "gpt-4o", "deepseek-v3",
/// ...). Throws UnknownModel with the known names in the message.
TokenBudget budget_for(std::string_view model);

/// Comma-separated list of the accepted model names.
std::string known_models();

struct FormatCount {
  std::string format;  // "llm4tg", "graphml", "gexf", "gml"
  std::size_t tokens = 0;
  std::vector<bool> fits;  // aligned with FormatReport::budgets
};

struct FormatReport {
  std::size_t node_count = 0;
  std::vector<TokenBudget> budgets;
  std::vector<FormatCount> formats;

  const FormatCount& at(std::string_view format) const;
  bool fits(std::string_view format, std::string_view model) const;
};

/// Serializes `g` as llm4tg, graphml, gexf and gml and counts each.
FormatReport compare_formats(const TransactionGraph& g, std::span<const TokenBudget> budgets,
                             const Encoding& encoding);
FormatReport compare_formats(const TransactionGraph& g, std::span<const TokenBudget> budgets);

/// "node_count,format,tokens,fits_<model>..." with non-alphanumerics
/// stripped from model names (gpt-3.5 -> fits_gpt35).
std::string report_csv_header(std::span<const TokenBudget> budgets);
/// One row per format, each terminated by a newline.
std::string report_csv_rows(const FormatReport& report);

}  // namespace llm4tg::tokens
