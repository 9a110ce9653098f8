#include "hare/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hare/errors.hpp"
#include "hare/evalmetric.hpp"
#include "hare/rng.hpp"

namespace hare {

namespace {
constexpr std::uint8_t kUndecided = 0;
constexpr std::uint8_t kHidden = 1;
constexpr std::uint8_t kShown = 2;
constexpr std::uint8_t kObserved = 3;

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Indices sorted by descending score, earlier index first on ties.
std::vector<std::size_t> rank_by_score(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::size_t ceil_fraction(double frac, std::size_t n) {
  // Guard against 0.75 * 4 landing at 3.0000000000000004.
  const double raw = frac * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

// Session that shows a fixed, precomputed set.
class FixedSetSession final : public PolicySession {
 public:
  FixedSetSession(std::size_t n, std::vector<bool> show)
      : PolicySession(n), show_(std::move(show)) {}

 protected:
  Decision on_decide(std::size_t index) override {
    return show_[index] ? Decision::kShow : Decision::kHide;
  }

 private:
  std::vector<bool> show_;
};

std::unique_ptr<PolicySession> fixed_set(std::size_t n, const std::vector<std::size_t>& chosen) {
  std::vector<bool> show(n, false);
  for (std::size_t i : chosen) show[i] = true;
  return std::make_unique<FixedSetSession>(n, std::move(show));
}

}  // namespace

// ---------------------------------------------------------------------------

PolicySession::PolicySession(std::size_t doc_size)
    : doc_size_(doc_size), state_(doc_size, kUndecided) {}

Decision PolicySession::decide(std::size_t index) {
  if (index != next_) {
    throw ContractViolation("decide(" + std::to_string(index) + ") out of order; expected " +
                            std::to_string(next_));
  }
  if (index >= doc_size_) {
    throw ContractViolation("decide(" + std::to_string(index) + ") past document end");
  }
  const Decision d = on_decide(index);
  state_[index] = d == Decision::kShow ? kShown : kHidden;
  ++next_;
  return d;
}

void PolicySession::observe(std::size_t index, int feedback) {
  if (index >= doc_size_ || state_[index] != kShown) {
    throw ContractViolation("observe(" + std::to_string(index) +
                            ") for a sentence that is not an unobserved shown sentence");
  }
  if (feedback != 0 && feedback != 1) {
    throw ContractViolation("feedback must be 0 or 1");
  }
  state_[index] = kObserved;
  on_observe(index, feedback);
}

// --- Simple heuristics ------------------------------------------------------

namespace {

class ControlSession final : public PolicySession {
 public:
  using PolicySession::PolicySession;

 protected:
  Decision on_decide(std::size_t) override { return Decision::kShow; }
};

class ShowModuloSession final : public PolicySession {
 public:
  ShowModuloSession(std::size_t n, std::size_t k) : PolicySession(n), k_(k) {}

 protected:
  Decision on_decide(std::size_t index) override {
    return index % k_ == 0 ? Decision::kShow : Decision::kHide;
  }

 private:
  std::size_t k_;
};

class HideNextSession final : public PolicySession {
 public:
  HideNextSession(std::size_t doc_size, std::size_t n) : PolicySession(doc_size), n_(n) {}

 protected:
  Decision on_decide(std::size_t index) override {
    return hide_through_ && index <= *hide_through_ ? Decision::kHide : Decision::kShow;
  }
  void on_observe(std::size_t index, int feedback) override {
    if (feedback == 0) hide_through_ = index + n_;
  }

 private:
  std::size_t n_;
  std::optional<std::size_t> hide_through_;
};

class HideAllSimilarSession final : public PolicySession {
 public:
  HideAllSimilarSession(const EmbeddedDocument& doc, double threshold)
      : PolicySession(doc.size()), doc_(&doc), threshold_(threshold) {}

 protected:
  Decision on_decide(std::size_t index) override {
    for (std::size_t r : rejected_) {
      if (doc_->similarity(index, r) >= threshold_) return Decision::kHide;
    }
    return Decision::kShow;
  }
  void on_observe(std::size_t index, int feedback) override {
    if (feedback == 0) rejected_.push_back(index);
  }

 private:
  const EmbeddedDocument* doc_;
  double threshold_;
  std::vector<std::size_t> rejected_;
};

class HideNextSimilarSession final : public PolicySession {
 public:
  HideNextSimilarSession(const EmbeddedDocument& doc, double threshold)
      : PolicySession(doc.size()), doc_(&doc), threshold_(threshold) {}

 protected:
  Decision on_decide(std::size_t index) override {
    if (anchor_ && index == chain_next_) {
      if (doc_->similarity(index, *anchor_) >= threshold_) {
        ++chain_next_;
        return Decision::kHide;
      }
      anchor_.reset();
    }
    return Decision::kShow;
  }
  void on_observe(std::size_t index, int feedback) override {
    if (feedback != 0) return;
    anchor_ = index;
    chain_next_ = index + 1;
  }

 private:
  const EmbeddedDocument* doc_;
  double threshold_;
  std::optional<std::size_t> anchor_;
  std::size_t chain_next_ = 0;
};

}  // namespace

std::unique_ptr<PolicySession> make_control(std::size_t doc_size) {
  return std::make_unique<ControlSession>(doc_size);
}

std::unique_ptr<PolicySession> make_show_modulo(std::size_t doc_size, std::size_t k) {
  if (k < 1) throw ConfigError("show_modulo needs k >= 1");
  return std::make_unique<ShowModuloSession>(doc_size, k);
}

std::unique_ptr<PolicySession> make_hide_next(std::size_t doc_size, std::size_t n) {
  if (n < 1) throw ConfigError("hide_next needs n >= 1");
  return std::make_unique<HideNextSession>(doc_size, n);
}

std::unique_ptr<PolicySession> make_hide_all_similar(const EmbeddedDocument& doc,
                                                     double threshold) {
  return std::make_unique<HideAllSimilarSession>(doc, threshold);
}

std::unique_ptr<PolicySession> make_hide_next_similar(const EmbeddedDocument& doc,
                                                      double threshold) {
  return std::make_unique<HideNextSimilarSession>(doc, threshold);
}

// --- Adapted generic summarizers ---------------------------------------------

namespace {

class GenDynamicSession final : public PolicySession {
 public:
  GenDynamicSession(SentenceScores scores, double epsilon, std::uint64_t seed)
      : PolicySession(scores.size()),
        scores_(std::move(scores)),
        epsilon_(epsilon),
        rng_(seed) {}

 protected:
  Decision on_decide(std::size_t index) override {
    if (rng_.uniform() < epsilon_) return Decision::kShow;
    return scores_.scores[index] >= threshold_ ? Decision::kShow : Decision::kHide;
  }
  void on_observe(std::size_t index, int feedback) override {
    if (feedback != 0) return;
    rejected_sum_ += scores_.scores[index];
    ++rejected_count_;
    threshold_ = rejected_sum_ / static_cast<double>(rejected_count_);
  }

 private:
  SentenceScores scores_;
  double epsilon_;
  Rng rng_;
  double threshold_ = 0.0;
  double rejected_sum_ = 0.0;
  std::size_t rejected_count_ = 0;
};

SentenceScores ensure_normalized(const SentenceScores& s) {
  return s.normalized ? s : normalize_unit_interval(s);
}

}  // namespace

std::unique_ptr<PolicySession> make_gen_fixed(const SentenceScores& scores, double frac) {
  if (!(frac > 0.0 && frac <= 1.0)) throw ConfigError("gen_fixed needs frac in (0, 1]");
  const auto norm = ensure_normalized(scores);
  const std::size_t n = norm.size();
  const std::size_t keep = std::min(n, ceil_fraction(frac, n));
  const auto order = rank_by_score(norm.scores);
  return fixed_set(n, std::vector<std::size_t>(order.begin(), order.begin() + keep));
}

std::unique_ptr<PolicySession> make_gen_dynamic(const SentenceScores& scores, double epsilon,
                                                std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("gen_dynamic needs eps in [0, 1]");
  return std::make_unique<GenDynamicSession>(ensure_normalized(scores), epsilon, seed);
}

// --- Logistic regression ------------------------------------------------------

double exploration_probability(const LrOptions& options, std::size_t index,
                               std::size_t doc_size) {
  if (options.schedule == ExplorationSchedule::kConstant) return options.epsilon;
  const double frac = static_cast<double>(index) / static_cast<double>(doc_size);
  return std::pow(1.0 - frac, options.beta);
}

namespace {

class LrSession final : public PolicySession {
 public:
  LrSession(const EmbeddedDocument& doc, const LrOptions& options, std::uint64_t seed)
      : PolicySession(doc.size()),
        doc_(&doc),
        options_(options),
        rng_(seed),
        weights_(doc.size() == 0 ? 0 : doc[0].dimension(), 0.0) {}

 protected:
  Decision on_decide(std::size_t index) override {
    if (!trained_) return Decision::kShow;
    if (rng_.uniform() < exploration_probability(options_, index, doc_size())) {
      return Decision::kShow;
    }
    return predict(index) >= options_.decision_threshold ? Decision::kShow : Decision::kHide;
  }

  void on_observe(std::size_t index, int feedback) override {
    examples_.push_back(index);
    labels_.push_back(feedback);
    accepts_ += feedback == 1;
    rejects_ += feedback == 0;
    if (accepts_ > 0 && rejects_ > 0) {
      refit();
      trained_ = true;
    }
  }

 private:
  double margin(std::size_t index) const {
    const auto x = (*doc_)[index].values();
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
    return z;
  }
  double predict(std::size_t index) const { return logistic(margin(index)); }

  // Full-batch gradient descent from zero on the mean log-loss + L2.
  void refit() {
    std::fill(weights_.begin(), weights_.end(), 0.0);
    bias_ = 0.0;
    const double inv_n = 1.0 / static_cast<double>(examples_.size());
    std::vector<double> grad(weights_.size());
    for (std::size_t it = 0; it < options_.iterations; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t e = 0; e < examples_.size(); ++e) {
        const double err = (predict(examples_[e]) - labels_[e]) * inv_n;
        const auto x = (*doc_)[examples_[e]].values();
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += err * x[j];
        grad_b += err;
      }
      double norm2 = grad_b * grad_b;
      for (std::size_t j = 0; j < grad.size(); ++j) {
        grad[j] += options_.l2 * weights_[j];
        norm2 += grad[j] * grad[j];
        weights_[j] -= options_.step * grad[j];
      }
      bias_ -= options_.step * grad_b;
      if (norm2 < 1e-16) break;
    }
  }

  const EmbeddedDocument* doc_;
  LrOptions options_;
  Rng rng_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<std::size_t> examples_;
  std::vector<int> labels_;
  std::size_t accepts_ = 0;
  std::size_t rejects_ = 0;
  bool trained_ = false;
};

}  // namespace

std::unique_ptr<PolicySession> make_lr(const EmbeddedDocument& doc, const LrOptions& options,
                                       std::uint64_t seed) {
  if (options.schedule == ExplorationSchedule::kConstant &&
      !(options.epsilon >= 0.0 && options.epsilon <= 1.0)) {
    throw ConfigError("lr needs eps in [0, 1]");
  }
  if (options.schedule == ExplorationSchedule::kDecreasing && !(options.beta > 0.0)) {
    throw ConfigError("lr decreasing schedule needs beta > 0");
  }
  return std::make_unique<LrSession>(doc, options, seed);
}

// --- CoverageOpt --------------------------------------------------------------

double concept_importance(double cfsum, double beta) { return logistic(cfsum / beta); }

CoverageOptSession::CoverageOptSession(const EmbeddedDocument& doc,
                                       std::vector<EmbeddingVector> centroids,
                                       const CoverageOptOptions& options)
    : PolicySession(doc.size()),
      doc_(&doc),
      options_(options),
      importance_at_decision_(doc.size(), 0.0) {
  const std::size_t k = centroids.size();
  relevance_.reserve(doc.size());
  for (const auto& x : doc.vectors) {
    std::vector<double> rel(k);
    for (std::size_t j = 0; j < k; ++j) rel[j] = std::max(0.0, dot(x, centroids[j]));
    relevance_.push_back(std::move(rel));
  }
  state_.cfsum.assign(k, options.initial_evidence);
  state_.concept_importance.assign(k, concept_importance(options.initial_evidence, options.beta));
  state_.coverage.assign(k, 0.0);
}

Decision CoverageOptSession::on_decide(std::size_t index) {
  const std::size_t n = doc_size();
  const std::size_t k = state_.cfsum.size();
  std::vector<double> gain(n - index, 0.0);
  for (std::size_t i = index; i < n; ++i) {
    double g = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      g += state_.concept_importance[j] * std::max(0.0, relevance_[i][j] - state_.coverage[j]);
    }
    gain[i - index] = g;
  }
  const auto scaled = normalize_unit_interval({"coverage_opt", std::move(gain), false}).scores;
  const double mine = scaled[0];
  // Rank among the remaining sentences; earlier index wins ties, and this is
  // the earliest remaining index.
  std::size_t rank = 0;
  for (std::size_t i = 1; i < scaled.size(); ++i) rank += scaled[i] > mine;
  importance_at_decision_[index] = mine;

  const std::size_t budget = ceil_fraction(state_.length_fraction, n);
  if (rank >= budget) return Decision::kHide;
  for (std::size_t j = 0; j < k; ++j) {
    state_.coverage[j] = std::max(state_.coverage[j], relevance_[index][j]);
  }
  return Decision::kShow;
}

void CoverageOptSession::on_observe(std::size_t index, int feedback) {
  const double sign = 2.0 * (static_cast<double>(feedback) - 0.5);
  for (std::size_t j = 0; j < state_.cfsum.size(); ++j) {
    state_.cfsum[j] += sign * relevance_[index][j];
    state_.concept_importance[j] = concept_importance(state_.cfsum[j], options_.beta);
  }
  if (feedback == 0) {
    rejected_importance_.push_back(importance_at_decision_[index]);
    const double mean =
        std::accumulate(rejected_importance_.begin(), rejected_importance_.end(), 0.0) /
        static_cast<double>(rejected_importance_.size());
    state_.length_fraction = std::clamp(1.0 - mean, 0.0, 1.0);
  }
}

std::unique_ptr<CoverageOptSession> make_coverage_opt(const EmbeddedDocument& doc,
                                                      const CoverageOptOptions& options,
                                                      std::uint64_t seed) {
  if (!(options.beta > 0.0)) throw ConfigError("coverage_opt needs beta > 0");
  if (options.concepts < 1) throw ConfigError("coverage_opt needs k >= 1");
  auto clusters = kmeans(doc.vectors, options.concepts, seed);
  return std::make_unique<CoverageOptSession>(doc, std::move(clusters.centroids), options);
}

// --- Oracles --------------------------------------------------------------------

std::vector<std::size_t> greedy_coverage_selection(const std::vector<double>& importances,
                                                   const EmbeddedDocument& doc,
                                                   std::size_t budget) {
  const std::size_t n = doc.size();
  budget = std::min(budget, n);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) dist[a][b] = dist[b][a] = cosine_distance(doc[a], doc[b]);
  }
  // Nearest selected distance per sentence; the empty set scores as distance 1.
  std::vector<double> nearest(n, 1.0);
  bool first = true;
  std::vector<bool> chosen(n, false);
  std::vector<std::size_t> out;
  while (out.size() < budget) {
    std::size_t best = n;
    double best_gain = first ? -std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (chosen[s]) continue;
      double gain = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        const double reach = first ? dist[x][s] : std::min(nearest[x], dist[x][s]);
        gain += importances[x] * (nearest[x] - reach);
      }
      if (gain > best_gain + 1e-15) {
        best_gain = gain;
        best = s;
      }
    }
    if (best == n) break;
    chosen[best] = true;
    out.push_back(best);
    for (std::size_t x = 0; x < n; ++x) {
      nearest[x] = first ? dist[x][best] : std::min(nearest[x], dist[x][best]);
    }
    first = false;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::unique_ptr<PolicySession> make_oracle_greedy(const SimulatedUser& user,
                                                  const EmbeddedDocument& doc) {
  const auto r = importances(user.interests, doc);
  return fixed_set(doc.size(), greedy_coverage_selection(r, doc, user.length_pref));
}

std::unique_ptr<PolicySession> make_oracle_sorted(const SimulatedUser& user,
                                                  const EmbeddedDocument& doc) {
  const auto r = importances(user.interests, doc);
  const auto order = rank_by_score(r);
  const std::size_t keep = std::min(user.length_pref, doc.size());
  return fixed_set(doc.size(), std::vector<std::size_t>(order.begin(), order.begin() + keep));
}

std::unique_ptr<PolicySession> make_oracle_uniform(const SimulatedUser& user,
                                                   std::size_t doc_size, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> idx(doc_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t keep = std::min(user.length_pref, doc_size);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(doc_size) - 1));
    std::swap(idx[i], idx[j]);
  }
  return fixed_set(doc_size, std::vector<std::size_t>(idx.begin(), idx.begin() + keep));
}

}  // namespace hare
