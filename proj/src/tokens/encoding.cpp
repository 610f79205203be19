#include "llm4tg/tokens/encoding.hpp"

#include <openssl/evp.h>
#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>

#include "llm4tg/errors.hpp"
#include "llm4tg/util/atomic_file.hpp"

namespace llm4tg::tokens {

namespace {

constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();

// cl100k_base pre-tokenizer. \s is spelled as \p{White_Space} because ICU's
// \s is narrower than the Unicode property the reference implementation uses.
constexpr std::string_view kCl100kPattern =
    R"('s|'S|'t|'T|'re|'rE|'Re|'RE|'ve|'vE|'Ve|'VE|'m|'M|'ll|'lL|'Ll|'LL|'d|'D)"
    R"(|[^\r\n\p{L}\p{N}]?\p{L}+)"
    R"(|\p{N}{1,3})"
    R"(| ?[^\p{White_Space}\p{L}\p{N}]+[\r\n]*)"
    R"(|\p{White_Space}*[\r\n]+)"
    R"(|\p{White_Space}+(?!\P{White_Space}))"
    R"(|\p{White_Space}+)";

struct BuiltinEncoding {
  std::string_view name;
  std::string_view file;
  std::string_view sha256;
  std::string_view pattern;
};

constexpr BuiltinEncoding kBuiltins[] = {
    {"cl100k_base", "cl100k_base.tiktoken", "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7",
     kCl100kPattern},
};

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw EncodingDataError("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  std::string out((text.size() / 4) * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0 || text.size() % 4 != 0) {
    throw EncodingDataError("bad base64 token '" + std::string(text) + "'");
  }
  std::size_t len = static_cast<std::size_t>(n);
  // EVP_DecodeBlock counts padding bytes as output.
  for (auto it = text.rbegin(); it != text.rend() && *it == '='; ++it) --len;
  out.resize(len);
  return out;
}

}  // namespace

struct Encoding::Pattern {
  std::unique_ptr<icu::RegexPattern> regex;
};

Encoding::Encoding(std::string name,
                   std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ranks,
                   std::unique_ptr<Pattern> pattern)
    : name_(std::move(name)), ranks_(std::move(ranks)), pattern_(std::move(pattern)) {}

Encoding::~Encoding() = default;

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("LLM4TG_DATA_DIR"); env && *env) {
    return env;
  }
  return LLM4TG_DATA_DIR;
}

std::shared_ptr<const Encoding> Encoding::from_file(const std::filesystem::path& ranks_path, std::string name,
                                                    std::string_view pattern,
                                                    std::optional<std::string_view> expected_sha256) {
  std::string data;
  try {
    data = util::read_file(ranks_path);
  } catch (const Error&) {
    throw EncodingDataError("rank file " + ranks_path.string() + " for " + name + " is missing");
  }
  if (expected_sha256 && sha256_hex(data) != *expected_sha256) {
    throw EncodingDataError("rank file " + ranks_path.string() + " does not match its pinned SHA-256");
  }
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> ranks;
  ranks.reserve(110'000);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string_view line(data.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    std::uint32_t rank = 0;
    if (space == std::string_view::npos ||
        std::from_chars(line.data() + space + 1, line.data() + line.size(), rank).ec != std::errc{}) {
      throw EncodingDataError("rank file " + ranks_path.string() + " line " + std::to_string(line_no) +
                              " is malformed");
    }
    ranks.emplace(base64_decode(line.substr(0, space)), rank);
  }

  UErrorCode status = U_ZERO_ERROR;
  UParseError parse_error;
  auto compiled = std::make_unique<Pattern>();
  compiled->regex.reset(icu::RegexPattern::compile(
      icu::UnicodeString::fromUTF8(icu::StringPiece(pattern.data(), static_cast<int32_t>(pattern.size()))), 0,
      parse_error, status));
  if (U_FAILURE(status)) {
    throw EncodingDataError("pre-tokenizer pattern for " + name + " does not compile: " + u_errorName(status));
  }
  return std::shared_ptr<const Encoding>(new Encoding(std::move(name), std::move(ranks), std::move(compiled)));
}

std::shared_ptr<const Encoding> Encoding::load(std::string_view name) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const Encoding>, std::less<>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) {
    return it->second;
  }
  for (const BuiltinEncoding& b : kBuiltins) {
    if (b.name == name) {
      auto enc = from_file(data_dir() / b.file, std::string(b.name), b.pattern, b.sha256);
      cache.emplace(std::string(name), enc);
      return enc;
    }
  }
  throw UnknownEncoding("unknown encoding '" + std::string(name) + "'");
}

void Encoding::encode_piece(std::string_view piece, std::vector<std::uint32_t>& out) const {
  if (auto it = ranks_.find(piece); it != ranks_.end()) {
    out.push_back(it->second);
    return;
  }
  auto rank_of = [&](std::size_t begin, std::size_t end) {
    auto it = ranks_.find(piece.substr(begin, end - begin));
    return it == ranks_.end() ? kNoRank : it->second;
  };
  // parts[i] = (start offset, rank of merging part i with part i+1)
  std::vector<std::pair<std::size_t, std::uint32_t>> parts;
  parts.reserve(piece.size() + 1);
  for (std::size_t i = 0; i + 1 < piece.size(); ++i) {
    parts.emplace_back(i, rank_of(i, i + 2));
  }
  parts.emplace_back(piece.size() - 1, kNoRank);
  parts.emplace_back(piece.size(), kNoRank);

  auto pair_rank = [&](std::size_t i) {
    return i + 3 < parts.size() ? rank_of(parts[i].first, parts[i + 3].first) : kNoRank;
  };
  while (true) {
    std::uint32_t best = kNoRank;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (parts[i].second < best) {
        best = parts[i].second;
        at = i;
      }
    }
    if (best == kNoRank) break;
    if (at > 0) parts[at - 1].second = pair_rank(at - 1);
    parts[at].second = pair_rank(at);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(at) + 1);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const std::uint32_t rank = rank_of(parts[i].first, parts[i + 1].first);
    if (rank == kNoRank) {
      throw EncodingDataError("byte sequence without a rank in " + name_);
    }
    out.push_back(rank);
  }
}

std::vector<std::uint32_t> Encoding::encode(std::string_view text) const {
  std::vector<std::uint32_t> out;
  if (text.empty()) return out;
  const icu::UnicodeString utext =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(pattern_->regex->matcher(utext, status));
  if (U_FAILURE(status)) {
    throw EncodingDataError(std::string("regex matcher failed: ") + u_errorName(status));
  }
  std::string piece;
  while (matcher->find(status) && U_SUCCESS(status)) {
    const int32_t start = matcher->start(status);
    const int32_t end = matcher->end(status);
    piece.clear();
    utext.tempSubStringBetween(start, end).toUTF8String(piece);
    encode_piece(piece, out);
  }
  if (U_FAILURE(status)) {
    throw EncodingDataError(std::string("regex matching failed: ") + u_errorName(status));
  }
  return out;
}

std::size_t Encoding::count(std::string_view text) const { return encode(text).size(); }

std::size_t count_tokens(std::string_view text, std::string_view encoding) {
  return Encoding::load(encoding)->count(text);
}

}  // namespace llm4tg::tokens
