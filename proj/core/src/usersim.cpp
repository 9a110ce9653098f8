#include "hare/usersim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hare/errors.hpp"

namespace hare {

double interest(const UserInterests& user, const EmbeddingVector& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : user.concepts) {
    best = std::max(best, c.weight * (1.0 - cosine_distance(c.concept_vector, x)));
  }
  return best;
}

std::vector<double> importances(const UserInterests& user, const EmbeddedDocument& doc) {
  std::vector<double> r;
  r.reserve(doc.size());
  for (const auto& v : doc.vectors) r.push_back(interest(user, v));
  return r;
}

double accept_probability(const FeedbackModel& fm, double r) {
  const double z = (r - fm.alpha) / fm.m;
  // Split by sign so exp never overflows.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

int draw_feedback(const FeedbackModel& fm, double r, Rng& rng) {
  return rng.bernoulli(accept_probability(fm, r)) ? 1 : 0;
}

double threshold_for_length(std::size_t length_pref, std::size_t doc_size) {
  return 1.0 - static_cast<double>(length_pref) / static_cast<double>(doc_size);
}

SimulatedUser sample_user(const EmbeddedDocument& doc, std::size_t k, double m, Rng& rng) {
  if (!(m > 0.0)) throw ConfigError("feedback noise m must be positive");
  SimulatedUser user;
  user.rng_seed = rng();
  const Clustering clusters = kmeans(doc.vectors, k, rng());

  std::vector<double> weights(k);
  for (double& w : weights) w = rng.uniform_open_closed();
  const double top = *std::max_element(weights.begin(), weights.end());
  for (std::size_t i = 0; i < k; ++i) {
    // The arg-max is pinned so max(w) == 1 holds bit-exactly.
    const double w = weights[i] == top ? 1.0 : weights[i] / top;
    user.interests.concepts.push_back({w, clusters.centroids[i]});
  }

  user.length_pref =
      static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(doc.size())));
  user.feedback = {threshold_for_length(user.length_pref, doc.size()), m};
  return user;
}

}  // namespace hare
