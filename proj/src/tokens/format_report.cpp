#include "llm4tg/tokens/format_report.hpp"

#include <algorithm>
#include <cctype>

#include "llm4tg/errors.hpp"
#include "llm4tg/io/llm4tg_codec.hpp"
#include "llm4tg/io/standard_formats.hpp"

namespace llm4tg::tokens {

namespace {

struct Alias {
  std::string_view name;
  std::string_view base;
};

constexpr Alias kAliases[] = {
    {"gpt-3.5", "gpt-3.5"},       {"gpt-3.5-turbo", "gpt-3.5"}, {"gpt35", "gpt-3.5"},
    {"deepseek", "deepseek"},     {"deepseek-v3", "deepseek"},  {"deepseekv3", "deepseek"},
    {"deepseek-chat", "deepseek"}, {"gpt-4", "gpt-4"},          {"gpt4", "gpt-4"},
    {"gpt-4o", "gpt-4"},          {"gpt-4-turbo", "gpt-4"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string column_name(std::string_view model) {
  std::string out = "fits_";
  for (unsigned char c : model) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace

std::vector<TokenBudget> default_budgets() {
  return {{"gpt-3.5", 16'385}, {"deepseek", 64'000}, {"gpt-4", 128'000}};
}

std::string known_models() {
  std::string out;
  for (const Alias& a : kAliases) {
    if (!out.empty()) out += ", ";
    out += a.name;
  }
  return out;
}

TokenBudget budget_for(std::string_view model) {
  const std::string key = lower(model);
  for (const Alias& a : kAliases) {
    if (a.name == key) {
      for (TokenBudget b : default_budgets()) {
        if (b.model == a.base) {
          b.model = std::string(model);
          return b;
        }
      }
    }
  }
  throw UnknownModel("unknown model '" + std::string(model) + "'; known budgets: " + known_models());
}

const FormatCount& FormatReport::at(std::string_view format) const {
  for (const FormatCount& f : formats) {
    if (f.format == format) return f;
  }
  throw std::out_of_range("no format " + std::string(format) + " in report");
}

bool FormatReport::fits(std::string_view format, std::string_view model) const {
  const FormatCount& f = at(format);
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i].model == model) return f.fits[i];
  }
  throw std::out_of_range("no model " + std::string(model) + " in report");
}

FormatReport compare_formats(const TransactionGraph& g, std::span<const TokenBudget> budgets,
                             const Encoding& encoding) {
  FormatReport report;
  report.node_count = g.size();
  report.budgets.assign(budgets.begin(), budgets.end());
  auto add = [&](std::string name, const std::string& text) {
    FormatCount c{std::move(name), encoding.count(text), {}};
    for (const TokenBudget& b : budgets) c.fits.push_back(c.tokens <= b.limit);
    report.formats.push_back(std::move(c));
  };
  add("llm4tg", io::serialize_llm4tg(g).text);
  for (io::StandardFormat f : {io::StandardFormat::GraphML, io::StandardFormat::Gexf, io::StandardFormat::Gml}) {
    add(std::string(io::to_string(f)), io::write_standard(g, f));
  }
  return report;
}

FormatReport compare_formats(const TransactionGraph& g, std::span<const TokenBudget> budgets) {
  return compare_formats(g, budgets, *Encoding::load());
}

std::string report_csv_header(std::span<const TokenBudget> budgets) {
  std::string out = "node_count,format,tokens";
  for (const TokenBudget& b : budgets) out += "," + column_name(b.model);
  return out + "\n";
}

std::string report_csv_rows(const FormatReport& report) {
  std::string out;
  for (const FormatCount& f : report.formats) {
    out += std::to_string(report.node_count) + "," + f.format + "," + std::to_string(f.tokens);
    for (bool fit : f.fits) out += fit ? ",true" : ",false";
    out += "\n";
  }
  return out;
}

}  // namespace llm4tg::tokens
