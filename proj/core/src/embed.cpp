#include "hare/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "hare/errors.hpp"
#include "hare/rng.hpp"
#include "hare/text.hpp"
#include "json.hpp"

namespace hare {

EmbeddingVector EmbeddingVector::normalized(std::vector<double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  const double n = std::sqrt(sq);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NormalizationError("cannot normalize a zero or non-finite vector");
  }
  for (double& v : values) v /= n;
  return EmbeddingVector(std::move(values));
}

double EmbeddingVector::norm() const {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("vector dimensions differ: " + std::to_string(a.dimension()) +
                            " vs " + std::to_string(b.dimension()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += a[i] * b[i];
  return s;
}

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  return std::clamp(1.0 - dot(a, b), 0.0, 2.0);
}

EmbeddedDocument EmbeddingProvider::embed_document(const Document& doc) const {
  EmbeddedDocument out{doc, {}};
  out.vectors.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto v = embed(doc, i);
    if (v.dimension() != dimension()) {
      throw DimensionMismatch("provider " + name() + " returned a vector of dimension " +
                              std::to_string(v.dimension()));
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hashed TF-IDF

HashedTfidfProvider::HashedTfidfProvider(const Corpus& corpus, std::size_t dimension,
                                         std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      const auto tokens = text::tokenize(s.text);
      const std::set<std::string> unique(tokens.begin(), tokens.end());
      for (const auto& t : unique) ++document_frequency_[t];
      n_units_ += 1.0;
    }
  }
}

double HashedTfidfProvider::idf(std::string_view token) const {
  auto it = document_frequency_.find(token);
  const double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + n_units_) / (1.0 + df)) + 1.0;
}

std::size_t HashedTfidfProvider::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a(token, 0xcbf29ce484222325ULL ^ mix64(seed_)) %
                                  dimension_);
}

EmbeddingVector HashedTfidfProvider::embed_text(std::string_view s) const {
  auto tokens = text::tokenize(s);
  if (tokens.empty()) {
    const auto trimmed = text::trim(s);
    if (trimmed.empty()) throw NormalizationError("cannot embed empty text");
    tokens.emplace_back(trimmed);
  }
  std::map<std::string_view, double> tf;
  for (const auto& t : tokens) tf[t] += 1.0;
  std::vector<double> values(dimension_, 0.0);
  for (const auto& [token, count] : tf) values[bucket(token)] += count * idf(token);
  return EmbeddingVector::normalized(std::move(values));
}

EmbeddingVector HashedTfidfProvider::embed(const Document& doc, std::size_t index) const {
  return embed_text(doc.sentences.at(index).text);
}

std::unique_ptr<HashedTfidfProvider> make_hashed_provider(const Corpus& corpus,
                                                          std::size_t dimension,
                                                          std::uint64_t seed) {
  if (dimension < 8) {
    throw ConfigError("hashed provider dimension must be at least 8, got " +
                      std::to_string(dimension));
  }
  if (corpus.empty()) throw EmptyCorpus("cannot fit IDF on an empty corpus");
  return std::make_unique<HashedTfidfProvider>(corpus, dimension, seed);
}

// ---------------------------------------------------------------------------
// File provider

FileEmbeddingProvider::FileEmbeddingProvider(
    std::map<std::pair<std::string, std::size_t>, EmbeddingVector> table,
    std::size_t dimension, std::string source)
    : table_(std::move(table)), dimension_(dimension), source_(std::move(source)) {}

EmbeddingVector FileEmbeddingProvider::embed(const Document& doc, std::size_t index) const {
  auto it = table_.find({doc.id, index});
  if (it == table_.end()) {
    throw MissingEmbedding("no vector for document '" + doc.id + "' sentence " +
                           std::to_string(index));
  }
  return it->second;
}

std::unique_ptr<FileEmbeddingProvider> parse_embedding_file(std::istream& in,
                                                            std::string source) {
  using nlohmann::json;
  std::map<std::pair<std::string, std::size_t>, EmbeddingVector> table;
  std::size_t dimension = 0;
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
    if (!rec.is_object() || !rec.contains("doc") || !rec["doc"].is_string() ||
        !rec.contains("idx") || !rec["idx"].is_number_integer() || !rec.contains("vec") ||
        !rec["vec"].is_array()) {
      throw ParseError("expected {\"doc\": string, \"idx\": int, \"vec\": [real]}", lineno);
    }
    const auto idx = rec["idx"].get<long long>();
    if (idx < 0) throw ParseError("negative sentence index", lineno);
    std::vector<double> values;
    values.reserve(rec["vec"].size());
    for (const auto& v : rec["vec"]) {
      if (!v.is_number()) throw ParseError("vector entry is not a number", lineno);
      values.push_back(v.get<double>());
    }
    if (dimension == 0) dimension = values.size();
    if (values.size() != dimension) {
      throw DimensionMismatch("line " + std::to_string(lineno) + ": vector of dimension " +
                              std::to_string(values.size()) + ", expected " +
                              std::to_string(dimension));
    }
    EmbeddingVector vec;
    try {
      vec = EmbeddingVector::normalized(std::move(values));
    } catch (const NormalizationError&) {
      throw NormalizationError("line " + std::to_string(lineno) + ": zero-norm vector");
    }
    table[{rec["doc"].get<std::string>(), static_cast<std::size_t>(idx)}] = std::move(vec);
  }
  if (dimension == 0) throw ParseError("embedding file has no records", lineno);
  return std::make_unique<FileEmbeddingProvider>(std::move(table), dimension,
                                                 std::move(source));
}

std::unique_ptr<FileEmbeddingProvider> make_file_provider(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  return parse_embedding_file(in, path.string());
}

void write_embeddings(const Corpus& corpus, const EmbeddingProvider& provider,
                      std::ostream& out) {
  using nlohmann::json;
  for (const auto& doc : corpus.documents) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto v = provider.embed(doc, i);
      json rec;
      rec["doc"] = doc.id;
      rec["idx"] = i;
      rec["vec"] = std::vector<double>(v.values().begin(), v.values().end());
      out << rec.dump() << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// K-Means

namespace {

double squared_distance(const EmbeddingVector& a, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = a[i] - c[i];
    s += d * d;
  }
  return s;
}

bool renormalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double n = std::sqrt(sq);
  if (!(n > 1e-12)) return false;
  for (double& x : v) x /= n;
  return true;
}

struct Run {
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignments;
  double inertia = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::vector<double> trace;
};

std::vector<std::vector<double>> seed_plus_plus(std::span<const EmbeddingVector> pts,
                                                std::size_t k, Rng& rng) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> centroids;
  const auto first = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
  centroids.emplace_back(pts[first].values().begin(), pts[first].values().end());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(pts[i], centroids.back());
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }
    centroids.emplace_back(pts[pick].values().begin(), pts[pick].values().end());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts[i], centroids.back()));
    }
  }
  return centroids;
}

double assign(std::span<const EmbeddingVector> pts,
              const std::vector<std::vector<double>>& centroids,
              std::vector<std::size_t>& assignments) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(pts[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignments[i] = best;
    inertia += best_d;
  }
  return inertia;
}

Run lloyd(std::span<const EmbeddingVector> pts, std::size_t k, Rng& rng,
          const KMeansOptions& opt) {
  const std::size_t n = pts.size();
  const std::size_t d = pts[0].dimension();
  Run run;
  run.centroids = seed_plus_plus(pts, k, rng);
  run.assignments.assign(n, 0);
  run.inertia = assign(pts, run.centroids, run.assignments);
  run.trace.push_back(run.inertia);

  for (std::size_t iter = 0; iter < opt.max_iters; ++iter) {
    std::vector<std::vector<double>> next(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& acc = next[run.assignments[i]];
      for (std::size_t j = 0; j < d; ++j) acc[j] += pts[i][j];
      ++counts[run.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0 && renormalize(next[c])) continue;
      // Empty or cancelled-out cluster: move it to the worst-served point.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dist = squared_distance(pts[i], run.centroids[run.assignments[i]]);
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      next[c].assign(pts[far].values().begin(), pts[far].values().end());
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = next[c][j] - run.centroids[c][j];
        s += diff * diff;
      }
      shift = std::max(shift, std::sqrt(s));
    }
    run.centroids = std::move(next);
    run.inertia = assign(pts, run.centroids, run.assignments);
    run.trace.push_back(run.inertia);
    run.iterations = iter + 1;
    if (shift < opt.tol) break;
  }
  return run;
}

}  // namespace

Clustering kmeans(std::span<const EmbeddingVector> vectors, std::size_t k,
                  std::uint64_t seed, const KMeansOptions& options) {
  if (k == 0) throw ConfigError("kmeans needs k >= 1");
  if (vectors.size() < k) {
    throw TooFewPoints("kmeans with k=" + std::to_string(k) + " on " +
                       std::to_string(vectors.size()) + " points");
  }
  const std::size_t d = vectors[0].dimension();
  for (const auto& v : vectors) {
    if (v.dimension() != d) throw DimensionMismatch("kmeans inputs differ in dimension");
  }
  Rng rng(seed);
  Run best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    Run run = lloyd(vectors, k, rng, options);
    if (run.inertia < best.inertia - 1e-12) best = std::move(run);
  }
  Clustering out;
  out.assignments = std::move(best.assignments);
  out.inertia = best.inertia;
  out.iterations = best.iterations;
  out.inertia_trace = std::move(best.trace);
  for (auto& c : best.centroids) out.centroids.emplace_back(std::move(c));
  return out;
}

}  // namespace hare
