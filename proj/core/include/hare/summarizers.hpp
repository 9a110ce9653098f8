#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hare/corpus.hpp"
#include "hare/embed.hpp"

namespace hare {

struct SentenceScores {
  std::string method;
  std::vector<double> scores;
  bool normalized = false;

  std::size_t size() const { return scores.size(); }
};

// Affine map onto [0, 1]; a constant input maps to all 0.5.
SentenceScores normalize_unit_interval(const SentenceScores& in);

struct LexRankOptions {
  double damping = 0.85;
  double threshold = 0.1;
  bool continuous = false;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
};

// Stationary distribution of the damped random walk over the cosine-similarity
// graph (self-similarity included). Raw scores sum to 1.
SentenceScores lexrank_scores(const EmbeddedDocument& doc, const LexRankOptions& opt = {});

struct TextRankOptions {
  double damping = 0.85;
  double tol = 1e-6;
  std::size_t max_iters = 200;
};

// Weighted PageRank over shared-content-word overlap normalized by
// log|s_i| + log|s_j| (denominator 1 when either sentence has < 2 tokens).
SentenceScores textrank_scores(const Document& doc, const TextRankOptions& opt = {});

// Full SumBasic ranking; score = 1 - rank / (n - 1), a lone sentence scores 1.
SentenceScores sumbasic_scores(const Document& doc);

// Dispatch by name: "lexrank", "textrank", "sumbasic". ConfigError otherwise.
SentenceScores summarizer_scores(std::string_view method, const EmbeddedDocument& doc);

// Damped PageRank on a row-stochastic transition matrix given as dense rows.
// Returns the distribution and the number of iterations used.
struct PowerIterationResult {
  std::vector<double> distribution;
  std::size_t iterations = 0;
  double residual = 0.0;
};
PowerIterationResult damped_power_iteration(const std::vector<std::vector<double>>& transition,
                                            double damping, double tol,
                                            std::size_t max_iters);

}  // namespace hare
