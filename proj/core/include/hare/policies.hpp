#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hare/embed.hpp"
#include "hare/summarizers.hpp"
#include "hare/trace.hpp"
#include "hare/usersim.hpp"

namespace hare {

// One reading of one document. decide() must be called once per index in
// increasing order; observe() only for indices that were shown. Both may
// change internal state, and state changes only influence later indices.
// The base class enforces the call protocol and throws ContractViolation.
class PolicySession {
 public:
  explicit PolicySession(std::size_t doc_size);
  virtual ~PolicySession() = default;

  PolicySession(const PolicySession&) = delete;
  PolicySession& operator=(const PolicySession&) = delete;

  Decision decide(std::size_t index);
  void observe(std::size_t index, int feedback);

  std::size_t doc_size() const { return doc_size_; }
  // Index of the next decide() call.
  std::size_t cursor() const { return next_; }

 protected:
  virtual Decision on_decide(std::size_t index) = 0;
  virtual void on_observe(std::size_t /*index*/, int /*feedback*/) {}

 private:
  std::size_t doc_size_;
  std::size_t next_ = 0;
  std::vector<std::uint8_t> state_;  // 0 undecided, 1 hidden, 2 shown, 3 observed
};

// --- Simple heuristics ------------------------------------------------------

std::unique_ptr<PolicySession> make_control(std::size_t doc_size);
// Shows index 0, k, 2k, ... ConfigError when k < 1.
std::unique_ptr<PolicySession> make_show_modulo(std::size_t doc_size, std::size_t k);
// Hides the n sentences after each rejected one.
std::unique_ptr<PolicySession> make_hide_next(std::size_t doc_size, std::size_t n);
// The session keeps a pointer to `doc`; the document must outlive it.
std::unique_ptr<PolicySession> make_hide_all_similar(const EmbeddedDocument& doc,
                                                     double threshold);
std::unique_ptr<PolicySession> make_hide_next_similar(const EmbeddedDocument& doc,
                                                      double threshold);

// --- Adapted generic summarizers ---------------------------------------------

// Shows the top ceil(frac * |D|) sentences by score, earlier index on ties.
std::unique_ptr<PolicySession> make_gen_fixed(const SentenceScores& scores, double frac);
// Threshold estimate starts at 0 and becomes the mean score of all rejected
// sentences; with probability epsilon a sentence is shown regardless.
std::unique_ptr<PolicySession> make_gen_dynamic(const SentenceScores& scores, double epsilon,
                                                std::uint64_t seed);

// --- Preference learning -----------------------------------------------------

enum class ExplorationSchedule { kConstant, kDecreasing };

struct LrOptions {
  ExplorationSchedule schedule = ExplorationSchedule::kConstant;
  double epsilon = 0.4;  // constant schedule
  double beta = 1.0;     // decreasing schedule: eps = (1 - i/|D|)^beta
  double l2 = 1e-3;
  double step = 0.1;
  std::size_t iterations = 100;
  double decision_threshold = 0.5;
};

std::unique_ptr<PolicySession> make_lr(const EmbeddedDocument& doc, const LrOptions& options,
                                       std::uint64_t seed);

// Exploration probability for sentence `index` under the given schedule.
double exploration_probability(const LrOptions& options, std::size_t index,
                               std::size_t doc_size);

struct CoverageOptOptions {
  std::size_t concepts = 4;  // k-means clusters per article
  double beta = 4.0;         // smoothness of concept importance
  double initial_evidence = 5.0;  // c: starting cfsum per concept
};

// Estimated importance of a concept: logistic(cfsum / beta), increasing in
// cfsum.
double concept_importance(double cfsum, double beta);

// Introspection for tests and tracing.
class CoverageOptSession;
struct CoverageOptState {
  std::vector<double> cfsum;
  std::vector<double> concept_importance;
  std::vector<double> coverage;
  double length_fraction = 1.0;
};

std::unique_ptr<CoverageOptSession> make_coverage_opt(const EmbeddedDocument& doc,
                                                      const CoverageOptOptions& options,
                                                      std::uint64_t seed);

class CoverageOptSession final : public PolicySession {
 public:
  CoverageOptSession(const EmbeddedDocument& doc, std::vector<EmbeddingVector> centroids,
                     const CoverageOptOptions& options);

  const CoverageOptState& state() const { return state_; }
  // Clipped cosine similarity of sentence `index` to every concept centroid.
  const std::vector<double>& concept_relevance(std::size_t index) const {
    return relevance_[index];
  }

 protected:
  Decision on_decide(std::size_t index) override;
  void on_observe(std::size_t index, int feedback) override;

 private:
  const EmbeddedDocument* doc_;
  CoverageOptOptions options_;
  std::vector<std::vector<double>> relevance_;
  std::vector<double> importance_at_decision_;
  std::vector<double> rejected_importance_;
  CoverageOptState state_;
};

// --- Privileged-information comparison models --------------------------------

// Greedy forward selection on the coverage score, at most l sentences.
std::unique_ptr<PolicySession> make_oracle_greedy(const SimulatedUser& user,
                                                  const EmbeddedDocument& doc);
// The l most important sentences.
std::unique_ptr<PolicySession> make_oracle_sorted(const SimulatedUser& user,
                                                  const EmbeddedDocument& doc);
// A uniformly random l-subset.
std::unique_ptr<PolicySession> make_oracle_uniform(const SimulatedUser& user,
                                                   std::size_t doc_size, std::uint64_t seed);

// Indices chosen by the greedy oracle, ascending.
std::vector<std::size_t> greedy_coverage_selection(const std::vector<double>& importances,
                                                   const EmbeddedDocument& doc,
                                                   std::size_t budget);

// --- Policy specification strings ---------------------------------------------

// "name" or "name:key=value,key=value". Parsing validates names, keys and value
// domains and fills defaults; ConfigError on any problem.
class PolicySpec {
 public:
  static PolicySpec parse(std::string_view text);

  const std::string& name() const { return name_; }
  const std::map<std::string, std::string>& params() const { return params_; }

  double number(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  // Canonical "name:k=v,..." with keys sorted and defaults filled.
  std::string canonical() const;
  // Parameters only, "k=v,...", empty when the policy has none.
  std::string params_string() const;

  bool requires_user() const;   // oracles
  bool stochastic() const;      // consumes its own random stream
  bool uses_summarizer() const;
  // True when a parameter lies outside the published grid ranges.
  bool out_of_grid() const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;

 private:
  std::string name_;
  std::map<std::string, std::string> params_;
};

// Summarizer scores for one document, computed on first use. Not thread-safe;
// one cache per document per worker.
class SummaryCache {
 public:
  explicit SummaryCache(const EmbeddedDocument& doc) : doc_(&doc) {}
  const SentenceScores& get(const std::string& method);

 private:
  const EmbeddedDocument* doc_;
  std::map<std::string, SentenceScores> normalized_;
};

struct PolicyContext {
  const EmbeddedDocument& doc;
  const SimulatedUser* user = nullptr;
  std::uint64_t seed = 0;
  SummaryCache* summaries = nullptr;
};

// ConfigError when an oracle is requested without a user.
std::unique_ptr<PolicySession> make_policy(const PolicySpec& spec, const PolicyContext& ctx);

}  // namespace hare
