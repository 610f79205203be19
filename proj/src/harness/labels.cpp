#include "llm4tg/harness/labels.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "llm4tg/errors.hpp"

namespace llm4tg::harness {

namespace {

struct Synonym {
  std::string_view word;
  Category category;
};

// Two-word spellings are matched before single words.
constexpr Synonym kPhrases[] = {
    {"darknet market", Category::DarknetMarket}, {"dark market", Category::DarknetMarket},
    {"dark web", Category::DarknetMarket},       {"money laundering", Category::MoneyLaundering},
    {"mining pool", Category::Pool},             {"ponzi scheme", Category::Ponzi},
};

constexpr Synonym kWords[] = {
    {"blackmail", Category::Blackmail},       {"extortion", Category::Blackmail},
    {"ransomware", Category::Blackmail},      {"ransom", Category::Blackmail},
    {"darknet", Category::DarknetMarket},     {"darknetmarket", Category::DarknetMarket},
    {"exchange", Category::Exchange},         {"exchanges", Category::Exchange},
    {"gambling", Category::Gambling},         {"gamble", Category::Gambling},
    {"casino", Category::Gambling},           {"betting", Category::Gambling},
    {"laundering", Category::MoneyLaundering}, {"moneylaundering", Category::MoneyLaundering},
    {"ponzi", Category::Ponzi},               {"pool", Category::Pool},
    {"mining", Category::Pool},               {"tumbler", Category::Tumbler},
    {"tumbling", Category::Tumbler},          {"mixer", Category::Tumbler},
    {"mixing", Category::Tumbler},
};

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<Category> match_word(std::string_view w) {
  for (const Synonym& s : kWords) {
    if (s.word == w) return s.category;
  }
  if (w.size() >= 5) {
    for (const Synonym& s : kWords) {
      if (s.word.size() >= 5 && edit_distance(s.word, w) <= 1) return s.category;
    }
  }
  return std::nullopt;
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Categories in order of mention.
std::vector<Category> mentions(std::string_view text) {
  const std::vector<std::string> words = words_of(text);
  std::vector<Category> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i + 1 < words.size()) {
      const std::string pair = words[i] + " " + words[i + 1];
      const auto it = std::find_if(std::begin(kPhrases), std::end(kPhrases),
                                   [&](const Synonym& s) { return s.word == pair; });
      if (it != std::end(kPhrases)) {
        out.push_back(it->category);
        ++i;
        continue;
      }
    }
    if (auto c = match_word(words[i])) out.push_back(*c);
  }
  return out;
}

// Offsets just past each "<n>." or "<n>)" item marker at a word boundary.
std::vector<std::pair<std::size_t, std::size_t>> item_spans(std::string_view text) {
  std::vector<std::size_t> starts;
  std::vector<std::size_t> marker_begin;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
    if (i > 0 && !std::isspace(static_cast<unsigned char>(text[i - 1])) && text[i - 1] != '(' &&
        text[i - 1] != '#') {
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && j - i < 2 && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j < text.size() && (text[j] == '.' || text[j] == ')' || text[j] == ':') &&
        (j + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[j + 1])))) {
      marker_begin.push_back(i);
      starts.push_back(j + 1);
      i = j;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::size_t end = k + 1 < starts.size() ? marker_begin[k + 1] : text.size();
    spans.emplace_back(starts[k], end);
  }
  return spans;
}

}  // namespace

std::optional<Category> normalize_category(std::string_view text) {
  if (auto c = parse_category(text)) return c;
  const auto found = mentions(text);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<Category> parse_ranked_labels(std::string_view response) {
  std::vector<Category> ranked;
  auto add = [&](Category c) {
    if (ranked.size() < 3 && std::find(ranked.begin(), ranked.end(), c) == ranked.end()) ranked.push_back(c);
  };
  for (const auto& [begin, end] : item_spans(response)) {
    const auto found = mentions(response.substr(begin, end - begin));
    if (!found.empty()) add(found.front());
  }
  if (ranked.empty()) {
    for (Category c : mentions(response)) add(c);
  }
  if (ranked.empty()) {
    throw NoParsableLabels("no category found in response");
  }
  return ranked;
}

}  // namespace llm4tg::harness
