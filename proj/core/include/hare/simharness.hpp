#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hare/corpus.hpp"
#include "hare/embed.hpp"
#include "hare/evalmetric.hpp"
#include "hare/policies.hpp"
#include "hare/trace.hpp"
#include "hare/usersim.hpp"

namespace hare {

// Source of the 0/1 swipe for a shown sentence.
class FeedbackSource {
 public:
  virtual ~FeedbackSource() = default;
  virtual int feedback(std::size_t index) = 0;
  virtual double importance(std::size_t /*index*/) const { return 0.0; }
};

// Draws feedback from the user's logistic model.
class SimulatedFeedback final : public FeedbackSource {
 public:
  SimulatedFeedback(const SimulatedUser& user, std::vector<double> importances, Rng& rng)
      : user_(&user), importances_(std::move(importances)), rng_(&rng) {}
  int feedback(std::size_t index) override {
    return draw_feedback(user_->feedback, importances_[index], *rng_);
  }
  double importance(std::size_t index) const override { return importances_[index]; }

 private:
  const SimulatedUser* user_;
  std::vector<double> importances_;
  Rng* rng_;
};

// Replays a recorded stream; sentences without a recorded value are
// ContractViolation.
class ScriptedFeedback final : public FeedbackSource {
 public:
  explicit ScriptedFeedback(std::map<std::size_t, int> script) : script_(std::move(script)) {}
  int feedback(std::size_t index) override;

 private:
  std::map<std::size_t, int> script_;
};

// The interaction loop: walk sentences in order, pass every shown sentence's
// feedback to the policy, stop once `budget` sentences were shown or the
// document ends.
SessionTrace run_loop(const EmbeddedDocument& doc, PolicySession& policy,
                      FeedbackSource& feedback, std::size_t budget,
                      std::optional<std::size_t> stop_after = std::nullopt);

// run_loop with the simulated user: budget l, feedback drawn from `rng`.
SessionTrace run_session(const EmbeddedDocument& doc, const SimulatedUser& user,
                         PolicySession& policy, Rng& rng);

struct ExperimentConfig {
  double sharp_m = 0.01;
  double noisy_m = 0.1;
  std::size_t trials = 3;
  std::size_t k_user = kDefaultUserConcepts;
  std::uint64_t seed = 42;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool timing = false;      // measure wall-clock per session (non-deterministic)
};

// Users and control scores for every (article, trial), shared by all policies
// so comparisons are paired.
class Population {
 public:
  struct Unit {
    SimulatedUser user;
    std::vector<double> importances;
    double control_score = 0.0;
  };

  Population(std::vector<EmbeddedDocument> docs, const ExperimentConfig& config);

  const ExperimentConfig& config() const { return config_; }
  const std::vector<EmbeddedDocument>& documents() const { return docs_; }
  const Unit& unit(std::size_t doc, std::size_t trial) const {
    return units_[doc * config_.trials + trial];
  }
  double control_mean(std::size_t trials_used) const;

 private:
  std::vector<EmbeddedDocument> docs_;
  ExperimentConfig config_;
  std::vector<Unit> units_;
};

Population make_population(const Corpus& corpus, const EmbeddingProvider& provider,
                           const ExperimentConfig& config);

struct ResultsRow {
  std::string policy;  // policy name
  std::string params;  // "k=v,..." or empty
  double score_sharp = 0.0;
  double score_noisy = 0.0;
  double score_adv = 0.0;
  std::optional<double> accept_rate;
  std::size_t trials = 1;
  std::optional<double> std_dev;  // stochastic policies only
  std::optional<double> ms_per_session;
  bool out_of_grid = false;

  std::string spec() const { return params.empty() ? policy : policy + ":" + params; }
};

struct ResultsTable {
  std::vector<ResultsRow> rows;

  bool empty() const { return rows.empty(); }
  const ResultsRow* find(std::string_view spec) const;
};

// One row for `spec` on the population. ConfigError for unknown specs.
ResultsRow evaluate_policy(const Population& population, const PolicySpec& spec);

ResultsTable run_experiment(const Population& population, const std::vector<PolicySpec>& specs);
ResultsTable run_experiment(const Corpus& corpus, const EmbeddingProvider& provider,
                            const PolicySpec& spec, const ExperimentConfig& config);

// Expands "name:key={a,b},other={x,y}" into the cartesian product of specs.
std::vector<std::string> expand_braces(std::string_view pattern);

// Published hyperparameter grid, as brace patterns.
std::vector<std::string> appendix_a_grid();

// Reads one pattern per line; '#' starts a comment.
std::vector<std::string> read_grid_file(const std::filesystem::path& path);

// Evaluates every expanded grid point, sorted by score_adv (best first).
ResultsTable grid_search(const Population& population, const std::vector<std::string>& patterns);

enum class ReportFormat { kCsv, kMarkdown };

// Stable columns: policy, params, score_sharp, score_noisy, score_adv,
// accept_rate, trials, std, ms_per_session. Empty cells for absent values.
void write_report(const ResultsTable& results, ReportFormat format, std::ostream& out);
// ConfigError on an empty table (no file is created); IoError when the path
// is not writable.
void emit_report(const ResultsTable& results, ReportFormat format,
                 const std::filesystem::path& path);
ResultsTable read_results_csv(std::istream& in);

}  // namespace hare
