#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace llm4tg {

/// Token amount held as an exact count of 1e-8 units (satoshis for BTC).
class Amount {
 public:
  static constexpr std::int64_t kUnitsPerCoin = 100'000'000;
  static constexpr int kMaxDecimals = 8;

  constexpr Amount() = default;

  static constexpr Amount from_units(std::int64_t units) { return Amount(units); }

  /// Accepts `123`, `123.`, `0.5`, `77.29740945`; at most eight fractional
  /// digits, no sign, no exponent.
  static std::optional<Amount> try_parse(std::string_view text);
  static Amount parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }
  double to_coins() const { return static_cast<double>(units_) / kUnitsPerCoin; }

  /// Shortest exact decimal rendering: trailing zeros trimmed, no exponent,
  /// integral amounts without a decimal point.
  std::string to_string() const;

  constexpr auto operator<=>(const Amount&) const = default;

  constexpr Amount& operator+=(Amount other) {
    units_ += other.units_;
    return *this;
  }
  friend constexpr Amount operator+(Amount a, Amount b) { return a += b; }

 private:
  constexpr explicit Amount(std::int64_t units) : units_(units) {}

  std::int64_t units_ = 0;
};

}  // namespace llm4tg
