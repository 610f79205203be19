#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace llm4tg::tokens {

inline constexpr std::string_view kDefaultEncoding = "cl100k_base";

/// Byte-pair encoding with a regex pre-tokenizer, compatible with the
/// tiktoken rank-file format (`<base64 token> <rank>` per line).
/// Immutable after construction; encode() is safe to call concurrently.
class Encoding {
 public:
  /// Loads a built-in encoding from the data directory, verifying the
  /// rank file against its pinned SHA-256. Results are cached.
  /// Throws UnknownEncoding or EncodingDataError.
  static std::shared_ptr<const Encoding> load(std::string_view name = kDefaultEncoding);

  /// Loads a rank file with an explicit pre-tokenizer pattern (ICU regex
  /// syntax). When `expected_sha256` is given the file must match it.
  static std::shared_ptr<const Encoding> from_file(const std::filesystem::path& ranks, std::string name,
                                                   std::string_view pattern,
                                                   std::optional<std::string_view> expected_sha256 = std::nullopt);

  ~Encoding();
  Encoding(const Encoding&) = delete;
  Encoding& operator=(const Encoding&) = delete;

  const std::string& name() const { return name_; }
  std::size_t vocabulary_size() const { return ranks_.size(); }

  /// Ordinary-text encoding; special-token text is treated as plain text.
  std::vector<std::uint32_t> encode(std::string_view text) const;
  std::size_t count(std::string_view text) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  struct Pattern;

  Encoding(std::string name, std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ranks,
           std::unique_ptr<Pattern> pattern);

  void encode_piece(std::string_view piece, std::vector<std::uint32_t>& out) const;

  std::string name_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ranks_;
  std::unique_ptr<Pattern> pattern_;
};

/// Directory with rank files: $LLM4TG_DATA_DIR if set, else the build-time
/// default.
std::filesystem::path data_dir();

std::size_t count_tokens(std::string_view text, std::string_view encoding = kDefaultEncoding);

}  // namespace llm4tg::tokens
