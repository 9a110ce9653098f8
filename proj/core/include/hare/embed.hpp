#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hare/corpus.hpp"

namespace hare {

// Unit-norm sentence vector. Construct through normalized() unless the values
// are already unit length.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}

  // Scales to unit Euclidean norm; NormalizationError on a zero vector.
  static EmbeddingVector normalized(std::vector<double> values);

  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double norm() const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

// Throws DimensionMismatch on unequal dimensions.
double dot(const EmbeddingVector& a, const EmbeddingVector& b);

// 1 - dot(a, b) for unit vectors; lies in [0, 2].
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  return dot(a, b);
}

struct EmbeddedDocument {
  Document document;
  std::vector<EmbeddingVector> vectors;

  std::size_t size() const { return vectors.size(); }
  const EmbeddingVector& operator[](std::size_t i) const { return vectors[i]; }
  double similarity(std::size_t i, std::size_t j) const {
    return dot(vectors[i], vectors[j]);
  }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual bool deterministic() const { return true; }

  // Vector for sentence `index` of `doc`.
  virtual EmbeddingVector embed(const Document& doc, std::size_t index) const = 0;

  EmbeddedDocument embed_document(const Document& doc) const;
};

// Token-hashed TF-IDF. Each token lands in one of `dimension` buckets chosen by
// a seeded hash; bucket weight is tf * idf with idf fit on the corpus
// sentences (smooth idf: ln((1 + N) / (1 + df)) + 1).
class HashedTfidfProvider final : public EmbeddingProvider {
 public:
  HashedTfidfProvider(const Corpus& corpus, std::size_t dimension, std::uint64_t seed);

  std::string name() const override { return "hashed"; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingVector embed(const Document& doc, std::size_t index) const override;

  EmbeddingVector embed_text(std::string_view text) const;
  double idf(std::string_view token) const;
  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
  double n_units_ = 0.0;
  std::map<std::string, std::size_t, std::less<>> document_frequency_;
};

inline constexpr std::size_t kDefaultEmbeddingDimension = 256;

// ConfigError when dimension < 8, EmptyCorpus when the corpus is empty.
std::unique_ptr<HashedTfidfProvider> make_hashed_provider(
    const Corpus& corpus, std::size_t dimension = kDefaultEmbeddingDimension,
    std::uint64_t seed = 0);

// Precomputed vectors keyed by (document id, sentence index).
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  FileEmbeddingProvider(std::map<std::pair<std::string, std::size_t>, EmbeddingVector> table,
                        std::size_t dimension, std::string source);

  std::string name() const override { return "file:" + source_; }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingVector embed(const Document& doc, std::size_t index) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<std::string, std::size_t>, EmbeddingVector> table_;
  std::size_t dimension_;
  std::string source_;
};

// Reads {"doc": id, "idx": i, "vec": [...]} lines. Vectors are renormalized.
std::unique_ptr<FileEmbeddingProvider> make_file_provider(const std::filesystem::path& path);
std::unique_ptr<FileEmbeddingProvider> parse_embedding_file(std::istream& in,
                                                            std::string source);

// Dumps every sentence vector of `corpus` in the embedding file format.
void write_embeddings(const Corpus& corpus, const EmbeddingProvider& provider,
                      std::ostream& out);

struct Clustering {
  std::vector<EmbeddingVector> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_trace;

  std::size_t k() const { return centroids.size(); }
};

struct KMeansOptions {
  std::size_t max_iters = 100;
  double tol = 1e-6;
  // Independent k-means++ restarts; the lowest-inertia run is kept.
  std::size_t restarts = 10;
};

// Lloyd's algorithm on unit vectors with k-means++ seeding. Centroids are
// renormalized after every update, so each step maximizes the summed cosine
// similarity and inertia never increases. TooFewPoints when |vectors| < k.
Clustering kmeans(std::span<const EmbeddingVector> vectors, std::size_t k,
                  std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace hare
