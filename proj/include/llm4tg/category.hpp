#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace llm4tg {

/// The closed set of address categories labelled in the subgraph dataset.
enum class Category {
  Blackmail,
  DarknetMarket,
  Exchange,
  Gambling,
  MoneyLaundering,
  Ponzi,
  Pool,
  Tumbler,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::Blackmail, Category::DarknetMarket,   Category::Exchange, Category::Gambling,
    Category::MoneyLaundering, Category::Ponzi,     Category::Pool,     Category::Tumbler,
};

/// Canonical lower-case spelling, e.g. "darknet-market".
std::string_view to_string(Category c);

/// Case-insensitive; spaces, hyphens and underscores are interchangeable.
std::optional<Category> parse_category(std::string_view text);

}  // namespace llm4tg
