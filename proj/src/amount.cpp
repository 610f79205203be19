#include "llm4tg/amount.hpp"

#include <limits>
#include <stdexcept>

namespace llm4tg {

std::optional<Amount> Amount::try_parse(std::string_view text) {
  if (text.empty()) {
    return std::nullopt;
  }
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t whole = 0;
  std::size_t pos = 0;
  for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
    const int digit = text[pos] - '0';
    if (whole > (kMax - digit) / 10) {
      return std::nullopt;
    }
    whole = whole * 10 + digit;
  }
  if (pos == 0) {
    return std::nullopt;
  }
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
      if (++frac_digits > kMaxDecimals) {
        return std::nullopt;
      }
      frac = frac * 10 + (text[pos] - '0');
    }
  }
  if (pos != text.size()) {
    return std::nullopt;
  }
  for (int i = frac_digits; i < kMaxDecimals; ++i) {
    frac *= 10;
  }
  if (whole > (kMax - frac) / kUnitsPerCoin) {
    return std::nullopt;
  }
  return Amount(whole * kUnitsPerCoin + frac);
}

Amount Amount::parse(std::string_view text) {
  if (auto parsed = try_parse(text)) {
    return *parsed;
  }
  throw std::invalid_argument("invalid amount '" + std::string(text) + "'");
}

std::string Amount::to_string() const {
  std::string out = std::to_string(units_ / kUnitsPerCoin);
  std::int64_t frac = units_ % kUnitsPerCoin;
  if (frac == 0) {
    return out;
  }
  std::string digits = std::to_string(frac);
  digits.insert(0, kMaxDecimals - digits.size(), '0');
  while (digits.back() == '0') {
    digits.pop_back();
  }
  out += '.';
  out += digits;
  return out;
}

}  // namespace llm4tg
