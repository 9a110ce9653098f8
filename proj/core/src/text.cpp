#include "hare/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace hare::text {
namespace {

// Function words ignored by the frequency-based scorers.
constexpr std::array<std::string_view, 127> kStopwords = {
    "a",       "about",   "above", "after", "again",   "against", "all",
    "am",      "an",      "and",   "any",   "are",     "as",      "at",
    "be",      "because", "been",  "before", "being",  "below",   "between",
    "both",    "but",     "by",    "can",   "could",   "did",     "do",
    "does",    "doing",   "down",  "during", "each",   "few",     "for",
    "from",    "further", "had",   "has",   "have",    "having",  "he",
    "her",     "here",    "hers",  "herself", "him",   "himself", "his",
    "how",     "i",       "if",    "in",    "into",    "is",      "it",
    "its",     "itself",  "just",  "me",    "more",    "most",    "my",
    "myself",  "no",      "nor",   "not",   "now",     "of",      "off",
    "on",      "once",    "only",  "or",    "other",   "our",     "ours",
    "ourselves", "out",   "over",  "own",   "s",       "said",    "same",
    "she",     "should",  "so",    "some",  "such",    "t",       "than",
    "that",    "the",     "their", "theirs", "them",   "themselves", "then",
    "there",   "these",   "they",  "this",  "those",   "through", "to",
    "too",     "under",   "until", "up",    "very",    "was",     "we",
    "were",    "what",    "when",  "where", "which",   "while",   "who",
    "whom",    "why",     "will",  "with",  "would",   "you",     "your",
    "also"};

bool is_token_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    if (is_token_byte(c)) {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_stopword(std::string_view token) {
  static const auto sorted = [] {
    auto a = kStopwords;
    std::sort(a.begin(), a.end());
    return a;
  }();
  return std::binary_search(sorted.begin(), sorted.end(), token);
}

std::vector<std::string> content_tokens(std::string_view s) {
  auto tokens = tokenize(s);
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace hare::text
