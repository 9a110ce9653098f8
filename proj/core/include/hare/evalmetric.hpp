#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hare/embed.hpp"
#include "hare/trace.hpp"

namespace hare {

// Importance-weighted coverage on the x100 scale:
//   100 * (1 - sum_x r_x * min_{s in S} dist(x, s) / sum_x r_x)
// Every min-distance term is 1 when S is empty. DegenerateImportances when
// sum r_x <= 0; ContractViolation on size mismatch or out-of-range indices.
double coverage_score(std::span<const double> importances, const EmbeddedDocument& doc,
                      std::span<const std::size_t> shown);

// policy_mean - control_mean.
double score_advantage(double policy_mean, double control_mean);

// accepted / shown; nullopt when nothing was shown.
std::optional<double> acceptance_rate(const SessionTrace& trace);

struct ScoreReport {
  double score_sharp = 0.0;
  double score_noisy = 0.0;
  double score_adv = 0.0;
  std::optional<double> acceptance_rate;
};

}  // namespace hare
