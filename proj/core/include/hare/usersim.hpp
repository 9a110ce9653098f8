#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hare/embed.hpp"
#include "hare/rng.hpp"

namespace hare {

struct WeightedConcept {
  double weight = 0.0;
  EmbeddingVector concept_vector;
};

// Weighted set of concepts; the heaviest weight is exactly 1.
struct UserInterests {
  std::vector<WeightedConcept> concepts;

  std::size_t k() const { return concepts.size(); }
};

struct FeedbackModel {
  double alpha = 0.5;  // decision threshold
  double m = 0.1;      // noise level (logistic temperature)
};

struct SimulatedUser {
  UserInterests interests;
  std::size_t length_pref = 1;  // l: sentences the user is willing to read
  FeedbackModel feedback;
  std::uint64_t rng_seed = 0;
};

// Importance of sentence x: max_i w_i * (1 - cosine_distance(c_i, x)).
double interest(const UserInterests& user, const EmbeddingVector& x);

// Importances of every sentence of `doc`.
std::vector<double> importances(const UserInterests& user, const EmbeddedDocument& doc);

// P(accept) = 1 / (1 + exp((alpha - r) / m)); increasing in r, 0.5 at r = alpha.
double accept_probability(const FeedbackModel& fm, double r);

// Bernoulli draw: 1 = accept (right swipe), 0 = reject.
int draw_feedback(const FeedbackModel& fm, double r, Rng& rng);

// alpha tied to the length preference: 1 - l / |D|.
double threshold_for_length(std::size_t length_pref, std::size_t doc_size);

inline constexpr std::size_t kDefaultUserConcepts = 4;

// Concepts are the k-means centroids of the document's sentences, weights are
// iid uniform(0,1] rescaled by their maximum, l is uniform on [1, |D|].
// Propagates TooFewPoints when the document has fewer than k sentences.
SimulatedUser sample_user(const EmbeddedDocument& doc, std::size_t k, double m, Rng& rng);

}  // namespace hare
