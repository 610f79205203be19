#include "llm4tg/category.hpp"

#include <cctype>
#include <string>

namespace llm4tg {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Blackmail: return "blackmail";
    case Category::DarknetMarket: return "darknet-market";
    case Category::Exchange: return "exchange";
    case Category::Gambling: return "gambling";
    case Category::MoneyLaundering: return "money-laundering";
    case Category::Ponzi: return "ponzi";
    case Category::Pool: return "pool";
    case Category::Tumbler: return "tumbler";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view text) {
  std::string norm;
  norm.reserve(text.size());
  for (char ch : text) {
    if (ch == ' ' || ch == '_') {
      norm += '-';
    } else {
      norm += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  for (Category c : kAllCategories) {
    if (to_string(c) == norm) {
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace llm4tg
