#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hare {

struct Sentence {
  std::size_t index = 0;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// One article: ordered sentences, presented to the reader in this order.
struct Document {
  std::string id;
  std::vector<Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
  const Sentence& operator[](std::size_t i) const { return sentences[i]; }

  friend bool operator==(const Document&, const Document&) = default;
};

// Builds a document from already-split sentence strings. Throws EmptyDocument
// when no sentence survives trimming.
Document make_document(std::string id, const std::vector<std::string>& texts);

struct Corpus {
  std::vector<Document> documents;
  std::string provenance;
  // Well-formed records dropped by the min_sentences filter.
  std::size_t dropped = 0;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  const Document* find(std::string_view id) const;
  double mean_sentences() const;
};

inline constexpr std::size_t kDefaultMinSentences = 10;

// Rule-based splitter: breaks after '.', '!' or '?' (plus trailing quotes or
// brackets) when followed by whitespace, unless the token ending in '.' is a
// known abbreviation, a single initial, or a decimal number.
std::vector<Sentence> split_sentences(std::string_view text);

// Reads the line-delimited corpus format:
//   {"id": "...", "sentences": ["...", ...]}   or   {"id": "...", "text": "..."}
// Blank lines are skipped. Documents shorter than min_sentences are dropped
// and counted in Corpus::dropped.
Corpus load_corpus(const std::filesystem::path& path,
                   std::size_t min_sentences = kDefaultMinSentences);
Corpus parse_corpus(std::istream& in, std::size_t min_sentences,
                    std::string provenance);

// Writes documents in the pre-split form accepted by load_corpus.
void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace hare
