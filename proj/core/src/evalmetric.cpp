#include "hare/evalmetric.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hare/errors.hpp"

namespace hare {

double coverage_score(std::span<const double> importances, const EmbeddedDocument& doc,
                      std::span<const std::size_t> shown) {
  if (importances.size() != doc.size()) {
    throw ContractViolation("coverage_score: " + std::to_string(importances.size()) +
                            " importances for " + std::to_string(doc.size()) + " sentences");
  }
  for (std::size_t s : shown) {
    if (s >= doc.size()) throw ContractViolation("coverage_score: shown index out of range");
  }
  double total = 0.0;
  for (double r : importances) total += r;
  if (!(total > 0.0)) throw DegenerateImportances("sum of importances must be positive");

  double missed = 0.0;
  for (std::size_t x = 0; x < doc.size(); ++x) {
    if (importances[x] == 0.0) continue;
    double nearest = 1.0;
    if (!shown.empty()) {
      nearest = std::numeric_limits<double>::infinity();
      for (std::size_t s : shown) {
        nearest = std::min(nearest, s == x ? 0.0 : cosine_distance(doc[x], doc[s]));
      }
    }
    missed += importances[x] * nearest;
  }
  return 100.0 * (1.0 - missed / total);
}

double score_advantage(double policy_mean, double control_mean) {
  return policy_mean - control_mean;
}

std::optional<double> acceptance_rate(const SessionTrace& trace) {
  if (trace.shown.empty()) return std::nullopt;
  return static_cast<double>(trace.accepted()) / static_cast<double>(trace.shown.size());
}

}  // namespace hare
