#include "hare/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "hare/errors.hpp"
#include "hare/text.hpp"
#include "json.hpp"

namespace hare {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 52> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",   "prof", "sr",   "jr",   "st",   "mt",
    "ft",   "gen",  "gov",  "sen",  "rep",  "col",  "capt", "lt",   "sgt",
    "maj",  "rev",  "hon",  "pres", "inc",  "ltd",  "co",   "corp", "bros",
    "vs",   "etc",  "no",   "nos",  "fig",  "approx", "dept", "est", "jan",
    "feb",  "mar",  "apr",  "jun",  "jul",  "aug",  "sep",  "sept", "oct",
    "nov",  "dec",  "e.g",  "i.e",  "u.s",  "u.k",  "a.m"};

bool is_abbreviation(std::string_view word) {
  std::string lower;
  for (unsigned char c : word) {
    if (std::isalpha(c) || c == '.') {
      lower.push_back(static_cast<char>(std::tolower(c)));
    } else if (!std::ispunct(c)) {
      return false;  // digits: "1930s."
    }
  }
  while (!lower.empty() && lower.back() == '.') lower.pop_back();
  if (lower.size() < 2) return false;
  // Dotted acronyms ("p.m", "u.s.a").
  if (lower.find('.') != std::string::npos) return true;
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) !=
         kAbbreviations.end();
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// "J." before another initial or a capitalized name ("J. R. Tolkien"). A lone
// letter followed by a one-letter sentence ("A. B?") still ends a sentence.
bool is_initial_before(std::string_view word, std::string_view rest) {
  if (word.size() != 2 || !std::isupper(static_cast<unsigned char>(word[0]))) return false;
  std::size_t n = 0;
  while (n < rest.size() && !std::isspace(static_cast<unsigned char>(rest[n]))) ++n;
  const auto next = rest.substr(0, n);
  if (next.empty() || !std::isupper(static_cast<unsigned char>(next[0]))) return false;
  if (next.size() == 2 && next[1] == '.') return true;
  std::size_t letters = 0;
  for (char c : next) letters += std::isalpha(static_cast<unsigned char>(c)) != 0;
  return letters >= 2;
}
bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

Document document_from_json(const json& rec, std::size_t line) {
  if (!rec.is_object()) throw ParseError("record is not a JSON object", line);
  auto id_it = rec.find("id");
  if (id_it == rec.end() || !id_it->is_string()) {
    throw ParseError("missing string field \"id\"", line);
  }
  Document doc;
  doc.id = id_it->get<std::string>();
  auto sent_it = rec.find("sentences");
  auto text_it = rec.find("text");
  if (sent_it != rec.end()) {
    if (!sent_it->is_array()) throw ParseError("\"sentences\" must be an array", line);
    std::vector<std::string> texts;
    for (const auto& s : *sent_it) {
      if (!s.is_string()) throw ParseError("sentence is not a string", line);
      texts.push_back(s.get<std::string>());
    }
    try {
      return make_document(std::move(doc.id), texts);
    } catch (const EmptyDocument& e) {
      throw ParseError(e.what(), line);
    }
  }
  if (text_it != rec.end()) {
    if (!text_it->is_string()) throw ParseError("\"text\" must be a string", line);
    try {
      doc.sentences = split_sentences(text_it->get<std::string>());
    } catch (const EmptyDocument& e) {
      throw ParseError(e.what(), line);
    }
    return doc;
  }
  throw ParseError("record needs \"sentences\" or \"text\"", line);
}

}  // namespace

Document make_document(std::string id, const std::vector<std::string>& texts) {
  Document doc{std::move(id), {}};
  for (const auto& t : texts) {
    auto trimmed = text::trim(t);
    if (trimmed.empty()) continue;
    doc.sentences.push_back({doc.sentences.size(), std::string(trimmed)});
  }
  if (doc.sentences.empty()) {
    throw EmptyDocument("document '" + doc.id + "' has no non-empty sentences");
  }
  return doc;
}

const Document* Corpus::find(std::string_view id) const {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

double Corpus::mean_sentences() const {
  if (documents.empty()) return 0.0;
  const std::size_t total = std::accumulate(
      documents.begin(), documents.end(), std::size_t{0},
      [](std::size_t acc, const Document& d) { return acc + d.size(); });
  return static_cast<double>(total) / static_cast<double>(documents.size());
}

std::vector<Sentence> split_sentences(std::string_view input) {
  const std::string_view text = text::trim(input);
  if (text.empty()) throw EmptyDocument("text is empty");

  std::vector<Sentence> out;
  const auto emit = [&](std::size_t begin, std::size_t end) {
    auto piece = text::trim(text.substr(begin, end - begin));
    if (!piece.empty()) out.push_back({out.size(), std::string(piece)});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t punct = i;
    std::size_t end = i;
    while (end < text.size() && is_terminal(text[end])) ++end;
    while (end < text.size() && is_closer(text[end])) ++end;
    if (end < text.size() && !is_space(text[end])) {
      i = end;
      continue;
    }
    std::size_t next = end;
    while (next < text.size() && is_space(text[next])) ++next;

    bool boundary = true;
    if (text[punct] == '.') {
      std::size_t w = punct;
      while (w > start && !is_space(text[w - 1])) --w;
      const auto word = text.substr(w, punct - w + 1);
      if (is_abbreviation(word) || is_initial_before(word, text.substr(next))) boundary = false;
    }
    // A lowercase continuation never opens a new sentence.
    if (next < text.size() && std::islower(static_cast<unsigned char>(text[next]))) {
      boundary = false;
    }
    if (boundary) {
      emit(start, end);
      start = next;
    }
    i = end;
  }
  if (start < text.size()) emit(start, text.size());
  return out;
}

Corpus parse_corpus(std::istream& in, std::size_t min_sentences,
                    std::string provenance) {
  if (min_sentences == 0) throw ConfigError("min_sentences must be positive");
  Corpus corpus;
  corpus.provenance = std::move(provenance);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    Document doc = document_from_json(rec, lineno);
    if (!seen.insert(doc.id).second) {
      throw ParseError("duplicate document id '" + doc.id + "'", lineno);
    }
    if (doc.size() < min_sentences) {
      ++corpus.dropped;
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) {
    throw EmptyCorpus("no document in " + corpus.provenance + " has at least " +
                      std::to_string(min_sentences) + " sentences");
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, std::size_t min_sentences) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return parse_corpus(in, min_sentences, path.string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) {
    json rec;
    rec["id"] = doc.id;
    auto& arr = rec["sentences"] = json::array();
    for (const auto& s : doc.sentences) arr.push_back(s.text);
    out << rec.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  write_corpus(corpus, out);
}

}  // namespace hare
