#include "hare/summarizers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hare/errors.hpp"
#include "hare/text.hpp"

namespace hare {

SentenceScores normalize_unit_interval(const SentenceScores& in) {
  SentenceScores out{in.method, in.scores, true};
  if (out.scores.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(out.scores.begin(), out.scores.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  for (double& s : out.scores) s = range > 0.0 ? (s - lo) / range : 0.5;
  return out;
}

PowerIterationResult damped_power_iteration(const std::vector<std::vector<double>>& transition,
                                            double damping, double tol,
                                            std::size_t max_iters) {
  const std::size_t n = transition.size();
  PowerIterationResult res;
  res.distribution.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    std::fill(next.begin(), next.end(), teleport);
    for (std::size_t j = 0; j < n; ++j) {
      const double mass = damping * res.distribution[j];
      const auto& row = transition[j];
      for (std::size_t i = 0; i < n; ++i) next[i] += mass * row[i];
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::abs(next[i] - res.distribution[i]);
    res.distribution.swap(next);
    res.iterations = it + 1;
    res.residual = diff;
    if (diff < tol) break;
  }
  return res;
}

namespace {

// Row-normalizes in place; rows without mass become uniform.
void make_stochastic(std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  for (auto& row : m) {
    double sum = 0.0;
    for (double v : row) sum += v;
    for (double& v : row) v = sum > 0.0 ? v / sum : 1.0 / static_cast<double>(n);
  }
}

}  // namespace

SentenceScores lexrank_scores(const EmbeddedDocument& doc, const LexRankOptions& opt) {
  const std::size_t n = doc.size();
  std::vector<std::vector<double>> graph(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sim = i == j ? 1.0 : doc.similarity(i, j);
      if (sim >= opt.threshold) graph[i][j] = opt.continuous ? sim : 1.0;
    }
  }
  make_stochastic(graph);
  auto res = damped_power_iteration(graph, opt.damping, opt.tol, opt.max_iters);
  return {"lexrank", std::move(res.distribution), false};
}

SentenceScores textrank_scores(const Document& doc, const TextRankOptions& opt) {
  const std::size_t n = doc.size();
  std::vector<std::set<std::string>> bags(n);
  std::vector<std::size_t> lengths(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto tokens = text::content_tokens(doc[i].text);
    lengths[i] = tokens.size();
    bags[i].insert(tokens.begin(), tokens.end());
  }
  std::vector<std::vector<double>> graph(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t shared = 0;
      for (const auto& t : bags[i]) shared += bags[j].count(t);
      if (shared == 0) continue;
      double denom = 1.0;
      if (lengths[i] >= 2 && lengths[j] >= 2) {
        denom = std::log(static_cast<double>(lengths[i])) +
                std::log(static_cast<double>(lengths[j]));
      }
      graph[i][j] = graph[j][i] = static_cast<double>(shared) / denom;
    }
  }
  make_stochastic(graph);
  auto res = damped_power_iteration(graph, opt.damping, opt.tol, opt.max_iters);
  return {"textrank", std::move(res.distribution), false};
}

SentenceScores sumbasic_scores(const Document& doc) {
  const std::size_t n = doc.size();
  SentenceScores out{"sumbasic", std::vector<double>(n, 0.0), true};
  if (n == 1) {
    out.scores[0] = 1.0;
    return out;
  }
  std::vector<std::vector<std::string>> words(n);
  std::map<std::string, double> prob;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    words[i] = text::content_tokens(doc[i].text);
    for (const auto& w : words[i]) prob[w] += 1.0;
    total += static_cast<double>(words[i].size());
  }
  if (total > 0.0) {
    for (auto& [w, p] : prob) p /= total;
  }

  std::vector<bool> picked(n, false);
  for (std::size_t rank = 0; rank < n; ++rank) {
    std::size_t best = n;
    double best_value = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (picked[i]) continue;
      double value = 0.0;
      if (!words[i].empty()) {
        for (const auto& w : words[i]) value += prob[w];
        value /= static_cast<double>(words[i].size());
      }
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    picked[best] = true;
    out.scores[best] = 1.0 - static_cast<double>(rank) / static_cast<double>(n - 1);
    for (const auto& w : std::set<std::string>(words[best].begin(), words[best].end())) {
      prob[w] *= prob[w];
    }
  }
  return out;
}

SentenceScores summarizer_scores(std::string_view method, const EmbeddedDocument& doc) {
  if (method == "lexrank") return lexrank_scores(doc);
  if (method == "textrank") return textrank_scores(doc.document);
  if (method == "sumbasic") return sumbasic_scores(doc.document);
  throw ConfigError("unknown summarizer '" + std::string(method) +
                    "' (expected lexrank, textrank or sumbasic)");
}

}  // namespace hare
