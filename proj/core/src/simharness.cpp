#include "hare/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "hare/errors.hpp"
#include "hare/rng.hpp"
#include "hare/text.hpp"

namespace hare {

namespace {

enum Stream : std::uint64_t { kUserStream = 1, kPolicyStream = 2, kFeedbackStream = 3 };

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs body(i) for i in [0, jobs) on a few threads. The first exception is
// rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t jobs, std::size_t threads, Body body) {
  const std::size_t workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next = jobs;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<std::size_t> prefix(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

}  // namespace

int ScriptedFeedback::feedback(std::size_t index) {
  auto it = script_.find(index);
  if (it == script_.end()) {
    throw ContractViolation("no scripted feedback for shown sentence " + std::to_string(index));
  }
  return it->second;
}

SessionTrace run_loop(const EmbeddedDocument& doc, PolicySession& policy,
                      FeedbackSource& feedback, std::size_t budget,
                      std::optional<std::size_t> stop_after) {
  if (policy.cursor() != 0) throw ContractViolation("run_loop needs a fresh policy session");
  if (policy.doc_size() != doc.size()) {
    throw ContractViolation("policy session was built for a different document");
  }
  const auto start = std::chrono::steady_clock::now();
  SessionTrace trace;
  trace.doc_id = doc.document.id;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (trace.shown.size() >= budget) break;
    const Decision d = policy.decide(i);
    trace.decisions.push_back(d);
    trace.stop_index = i;
    if (d == Decision::kShow) {
      trace.shown.push_back(i);
      const int value = feedback.feedback(i);
      trace.feedback.push_back({i, value, feedback.importance(i)});
      policy.observe(i, value);
    }
    if (stop_after && i >= *stop_after) break;
  }
  trace.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

SessionTrace run_session(const EmbeddedDocument& doc, const SimulatedUser& user,
                         PolicySession& policy, Rng& rng) {
  SimulatedFeedback source(user, importances(user.interests, doc), rng);
  SessionTrace trace = run_loop(doc, policy, source, user.length_pref);
  trace.user = {user.length_pref, user.feedback.alpha, user.feedback.m, user.rng_seed};
  return trace;
}

// ---------------------------------------------------------------------------

Population::Population(std::vector<EmbeddedDocument> docs, const ExperimentConfig& config)
    : docs_(std::move(docs)), config_(config) {
  if (docs_.empty()) throw EmptyCorpus("experiment needs at least one document");
  if (config_.trials == 0) throw ConfigError("trials must be >= 1");
  if (!(config_.sharp_m > 0.0) || !(config_.noisy_m > 0.0)) {
    throw ConfigError("noise levels must be positive");
  }
  units_.resize(docs_.size() * config_.trials);
  parallel_for(docs_.size(), config_.threads, [&](std::size_t d) {
    const auto& doc = docs_[d];
    for (std::size_t t = 0; t < config_.trials; ++t) {
      Rng rng(derive_seed({config_.seed, d, t, kUserStream}));
      Unit& u = units_[d * config_.trials + t];
      u.user = sample_user(doc, config_.k_user, config_.noisy_m, rng);
      u.importances = importances(u.user.interests, doc);
      u.control_score = coverage_score(u.importances, doc, prefix(u.user.length_pref));
    }
  });
}

double Population::control_mean(std::size_t trials_used) const {
  double sum = 0.0;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    for (std::size_t t = 0; t < trials_used; ++t) sum += unit(d, t).control_score;
  }
  return sum / static_cast<double>(docs_.size() * trials_used);
}

Population make_population(const Corpus& corpus, const EmbeddingProvider& provider,
                           const ExperimentConfig& config) {
  std::vector<EmbeddedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus.documents) docs.push_back(provider.embed_document(d));
  return Population(std::move(docs), config);
}

const ResultsRow* ResultsTable::find(std::string_view spec) const {
  for (const auto& r : rows) {
    if (r.spec() == spec) return &r;
  }
  return nullptr;
}

ResultsRow evaluate_policy(const Population& population, const PolicySpec& spec) {
  const auto& cfg = population.config();
  const auto& docs = population.documents();
  const std::size_t trials = spec.stochastic() ? cfg.trials : 1;
  const double arm_m[2] = {cfg.sharp_m, cfg.noisy_m};

  struct Cell {
    double score[2] = {0.0, 0.0};
    std::optional<double> accept;
    double ms = 0.0;
  };
  std::vector<Cell> cells(docs.size() * trials);

  parallel_for(docs.size(), cfg.threads, [&](std::size_t d) {
    const auto& doc = docs[d];
    SummaryCache summaries(doc);
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& unit = population.unit(d, t);
      Cell& cell = cells[d * trials + t];
      for (std::size_t arm = 0; arm < 2; ++arm) {
        SimulatedUser user = unit.user;
        user.feedback.m = arm_m[arm];
        const auto policy_seed = derive_seed({cfg.seed, d, t, arm, kPolicyStream});
        Rng feedback_rng(derive_seed({cfg.seed, d, t, arm, kFeedbackStream}));
        const auto start = std::chrono::steady_clock::now();
        auto policy = make_policy(spec, {doc, &user, policy_seed, &summaries});
        SimulatedFeedback source(user, unit.importances, feedback_rng);
        SessionTrace trace = run_loop(doc, *policy, source, user.length_pref);
        if (cfg.timing) {
          cell.ms += std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
        }
        cell.score[arm] = coverage_score(unit.importances, doc, trace.shown);
        if (arm == 1) cell.accept = acceptance_rate(trace);
      }
    }
  });

  ResultsRow row;
  row.policy = spec.name();
  row.params = spec.params_string();
  row.trials = trials;
  row.out_of_grid = spec.out_of_grid();

  std::vector<double> trial_noisy(trials, 0.0), trial_sharp(trials, 0.0),
      trial_control(trials, 0.0);
  double accept_sum = 0.0;
  std::size_t accept_n = 0;
  double ms_sum = 0.0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t t = 0; t < trials; ++t) {
      const Cell& c = cells[d * trials + t];
      trial_sharp[t] += c.score[0];
      trial_noisy[t] += c.score[1];
      trial_control[t] += population.unit(d, t).control_score;
      if (c.accept) {
        accept_sum += *c.accept;
        ++accept_n;
      }
      ms_sum += c.ms;
    }
  }
  const double n_docs = static_cast<double>(docs.size());
  std::vector<double> trial_adv(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    trial_sharp[t] /= n_docs;
    trial_noisy[t] /= n_docs;
    trial_control[t] /= n_docs;
    trial_adv[t] = score_advantage(trial_noisy[t], trial_control[t]);
  }
  row.score_sharp = mean(trial_sharp);
  row.score_noisy = mean(trial_noisy);
  row.score_adv = score_advantage(row.score_noisy, mean(trial_control));
  if (accept_n > 0) row.accept_rate = accept_sum / static_cast<double>(accept_n);
  if (spec.stochastic()) row.std_dev = sample_std(trial_adv);
  if (cfg.timing) row.ms_per_session = ms_sum / (2.0 * n_docs * static_cast<double>(trials));
  return row;
}

ResultsTable run_experiment(const Population& population, const std::vector<PolicySpec>& specs) {
  ResultsTable table;
  for (const auto& s : specs) table.rows.push_back(evaluate_policy(population, s));
  return table;
}

ResultsTable run_experiment(const Corpus& corpus, const EmbeddingProvider& provider,
                            const PolicySpec& spec, const ExperimentConfig& config) {
  const auto population = make_population(corpus, provider, config);
  return run_experiment(population, {spec});
}

// ---------------------------------------------------------------------------
// Grids

std::vector<std::string> expand_braces(std::string_view pattern) {
  const auto open = pattern.find('{');
  if (open == std::string_view::npos) {
    if (pattern.find('}') != std::string_view::npos) {
      throw ConfigError("unbalanced '}' in grid pattern '" + std::string(pattern) + "'");
    }
    return {std::string(pattern)};
  }
  const auto close = pattern.find('}', open);
  if (close == std::string_view::npos) {
    throw ConfigError("unbalanced '{' in grid pattern '" + std::string(pattern) + "'");
  }
  const std::string head(pattern.substr(0, open));
  const auto body = pattern.substr(open + 1, close - open - 1);
  const auto tail = pattern.substr(close + 1);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = body.find(',', pos);
    const auto alt = text::trim(body.substr(pos, comma - pos));
    if (alt.empty()) throw ConfigError("empty alternative in '" + std::string(pattern) + "'");
    for (auto& rest : expand_braces(tail)) out.push_back(head + std::string(alt) + rest);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> appendix_a_grid() {
  return {
      "show_modulo:k={2,3,4,5}",
      "hide_next:n={1,2,3,4}",
      "hide_next_similar:threshold={0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9}",
      "hide_all_similar:threshold={0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9}",
      "gen_fixed:summarizer={lexrank,sumbasic,textrank},frac={0.25,0.5,0.75}",
      "gen_dynamic:summarizer={lexrank,sumbasic,textrank},eps={0,0.1,0.2,0.3,0.4,0.5}",
      "lr:schedule=const,eps={0,0.1,0.2,0.3,0.4,0.5}",
      "lr:schedule=dec,beta={0.25,0.5,1,2,4}",
      // c=5 lies outside the published search range but appears in its
      // result table; rows for it are flagged out-of-grid.
      "coverage_opt:beta={0.25,0.5,1,2,4},c={0,1,2,3,4,5}",
  };
}

std::vector<std::string> read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const auto body = text::trim(std::string_view(line).substr(0, hash));
    if (!body.empty()) out.emplace_back(body);
  }
  if (out.empty()) throw ConfigError("grid file " + path.string() + " has no patterns");
  return out;
}

ResultsTable grid_search(const Population& population, const std::vector<std::string>& patterns) {
  std::vector<PolicySpec> specs;
  for (const auto& p : patterns) {
    for (const auto& s : expand_braces(p)) specs.push_back(PolicySpec::parse(s));
  }
  ResultsTable table = run_experiment(population, specs);
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ResultsRow& a, const ResultsRow& b) {
                     return a.score_adv > b.score_adv;
                   });
  return table;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

constexpr const char* kColumns[] = {"policy",    "params",      "score_sharp",
                                    "score_noisy", "score_adv", "accept_rate",
                                    "trials",    "std",         "ms_per_session"};

}  // namespace

void write_report(const ResultsTable& results, ReportFormat format, std::ostream& out) {
  const auto opt6 = [](const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); };
  if (format == ReportFormat::kCsv) {
    for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i ? "," : "") << kColumns[i];
    out << '\n';
    for (const auto& r : results.rows) {
      out << csv_field(r.policy) << ',' << csv_field(r.params) << ',' << fixed6(r.score_sharp)
          << ',' << fixed6(r.score_noisy) << ',' << fixed6(r.score_adv) << ','
          << opt6(r.accept_rate) << ',' << r.trials << ',' << opt6(r.std_dev) << ','
          << opt6(r.ms_per_session) << '\n';
    }
    return;
  }
  const auto opt2 = [](const std::optional<double>& v) { return v ? fixed2(*v) : std::string(); };
  out << "| Model | Params | score_sharp | score_noisy | score_adv | Accept | Trials | Std | ms/session |\n";
  out << "|---|---|---:|---:|---:|---:|---:|---:|---:|\n";
  bool any_out_of_grid = false;
  for (const auto& r : results.rows) {
    std::string model = r.policy + (r.trials > 1 ? "*" : "");
    if (r.out_of_grid) {
      model += " (out of grid)";
      any_out_of_grid = true;
    }
    out << "| " << model << " | " << r.params << " | " << fixed2(r.score_sharp) << " | "
        << fixed2(r.score_noisy) << " | " << fixed2(r.score_adv) << " | "
        << (r.accept_rate ? fixed2(100.0 * *r.accept_rate) + "%" : std::string()) << " | "
        << r.trials << " | " << opt2(r.std_dev) << " | " << opt2(r.ms_per_session) << " |\n";
  }
  out << "\nStochastic policies are marked with * and averaged over their trials.";
  if (any_out_of_grid) out << " Out-of-grid rows lie outside the published search ranges.";
  out << '\n';
}

void emit_report(const ResultsTable& results, ReportFormat format,
                 const std::filesystem::path& path) {
  if (results.empty()) throw ConfigError("refusing to write an empty results table");
  std::ostringstream buf;
  write_report(results, format, buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report to " + path.string());
  out << buf.str();
  if (!out) throw IoError("failed while writing " + path.string());
}

ResultsTable read_results_csv(std::istream& in) {
  ResultsTable table;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing CSV header", 1);
  ++lineno;
  const auto header = split_csv_line(line);
  if (header.size() != std::size(kColumns) ||
      !std::equal(header.begin(), header.end(), std::begin(kColumns))) {
    throw ParseError("unexpected CSV header", lineno);
  }
  const auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != std::size(kColumns)) throw ParseError("wrong number of CSV fields", lineno);
    try {
      ResultsRow r;
      r.policy = f[0];
      r.params = f[1];
      r.score_sharp = std::stod(f[2]);
      r.score_noisy = std::stod(f[3]);
      r.score_adv = std::stod(f[4]);
      r.accept_rate = opt(f[5]);
      r.trials = static_cast<std::size_t>(std::stoul(f[6]));
      r.std_dev = opt(f[7]);
      r.ms_per_session = opt(f[8]);
      table.rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", lineno);
    }
  }
  return table;
}

}  // namespace hare
