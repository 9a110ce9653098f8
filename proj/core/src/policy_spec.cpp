#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "hare/errors.hpp"
#include "hare/policies.hpp"
#include "hare/text.hpp"

namespace hare {
namespace {

enum class Kind { kInteger, kReal, kChoice };

struct ParamRule {
  std::string key;
  Kind kind;
  std::string fallback;
  std::function<bool(double)> valid;  // numeric kinds
  std::vector<std::string> choices;   // kChoice
  std::vector<double> grid;           // published grid values; empty = any
  std::string domain;                 // for diagnostics
};

struct PolicyRule {
  std::string name;
  std::vector<ParamRule> params;
  bool requires_user = false;
  bool stochastic = false;
  bool summarizer = false;
};

const std::vector<double> kThresholdGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
const std::vector<double> kEpsGrid = {0, 0.1, 0.2, 0.3, 0.4, 0.5};
const std::vector<double> kBetaGrid = {0.25, 0.5, 1, 2, 4};

const std::vector<PolicyRule>& rules() {
  static const std::vector<PolicyRule> table = [] {
    const auto at_least_one = [](double v) { return v >= 1.0; };
    const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    const auto half_open = [](double v) { return v > 0.0 && v <= 1.0; };
    const auto positive = [](double v) { return v > 0.0; };
    const auto non_negative = [](double v) { return v >= 0.0; };
    const ParamRule summarizer{"summarizer", Kind::kChoice, "sumbasic", {},
                               {"lexrank", "sumbasic", "textrank"}, {}, ""};
    std::vector<PolicyRule> t;
    t.push_back({"control", {}, false, false, false});
    t.push_back({"show_modulo",
                 {{"k", Kind::kInteger, "2", at_least_one, {}, {2, 3, 4, 5}, "integer >= 1"}},
                 false, false, false});
    t.push_back({"hide_next",
                 {{"n", Kind::kInteger, "2", at_least_one, {}, {1, 2, 3, 4}, "integer >= 1"}},
                 false, false, false});
    t.push_back({"hide_next_similar",
                 {{"threshold", Kind::kReal, "0.5", unit, {}, kThresholdGrid, "[0, 1]"}},
                 false, false, false});
    t.push_back({"hide_all_similar",
                 {{"threshold", Kind::kReal, "0.5", unit, {}, kThresholdGrid, "[0, 1]"}},
                 false, false, false});
    t.push_back({"gen_fixed",
                 {summarizer,
                  {"frac", Kind::kReal, "0.75", half_open, {}, {0.25, 0.5, 0.75}, "(0, 1]"}},
                 false, false, true});
    t.push_back({"gen_dynamic",
                 {summarizer, {"eps", Kind::kReal, "0.5", unit, {}, kEpsGrid, "[0, 1]"}},
                 false, true, true});
    t.push_back({"lr",
                 {{"schedule", Kind::kChoice, "const", {}, {"const", "dec"}, {}, ""},
                  {"eps", Kind::kReal, "0.4", unit, {}, kEpsGrid, "[0, 1]"},
                  {"beta", Kind::kReal, "1", positive, {}, kBetaGrid, "> 0"}},
                 false, true, false});
    t.push_back({"coverage_opt",
                 {{"k", Kind::kInteger, "4", at_least_one, {}, {}, "integer >= 1"},
                  {"beta", Kind::kReal, "4", positive, {}, kBetaGrid, "> 0"},
                  {"c", Kind::kReal, "5", non_negative, {}, {0, 1, 2, 3, 4}, ">= 0"}},
                 false, false, false});
    t.push_back({"oracle_greedy", {}, true, false, false});
    t.push_back({"oracle_sorted", {}, true, false, false});
    t.push_back({"oracle_uniform", {}, true, true, false});
    return t;
  }();
  return table;
}

const PolicyRule& rule_for(const std::string& name) {
  for (const auto& r : rules()) {
    if (r.name == name) return r;
  }
  std::string known;
  for (const auto& r : rules()) known += (known.empty() ? "" : ", ") + r.name;
  throw ConfigError("unknown policy '" + name + "' (known: " + known + ")");
}

std::string format_number(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError("parameter '" + key + "': '" + value + "' is not a number");
  }
  return v;
}

bool on_grid(double v, const std::vector<double>& grid) {
  if (grid.empty()) return true;
  return std::any_of(grid.begin(), grid.end(),
                     [&](double g) { return std::abs(g - v) < 1e-9; });
}

}  // namespace

PolicySpec PolicySpec::parse(std::string_view raw) {
  const auto body = text::trim(raw);
  if (body.empty()) throw ConfigError("empty policy spec");
  PolicySpec spec;
  const auto colon = body.find(':');
  spec.name_ = std::string(text::trim(body.substr(0, colon)));
  const PolicyRule& rule = rule_for(spec.name_);

  std::map<std::string, std::string> given;
  if (colon != std::string_view::npos) {
    std::string_view rest = body.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = text::trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("policy '" + spec.name_ + "': expected key=value, got '" +
                          std::string(item) + "'");
      }
      std::string key(text::trim(item.substr(0, eq)));
      std::string value(text::trim(item.substr(eq + 1)));
      if (key == "epsilon") key = "eps";
      if (!given.emplace(key, value).second) {
        throw ConfigError("policy '" + spec.name_ + "': parameter '" + key + "' given twice");
      }
    }
  }

  for (const auto& [key, value] : given) {
    const bool known = std::any_of(rule.params.begin(), rule.params.end(),
                                   [&](const ParamRule& p) { return p.key == key; });
    if (!known) {
      std::string keys;
      for (const auto& p : rule.params) keys += (keys.empty() ? "" : ", ") + p.key;
      throw ConfigError("policy '" + spec.name_ + "' has no parameter '" + key + "'" +
                        (keys.empty() ? std::string(" (it takes none)") : " (accepts: " + keys + ")"));
    }
  }

  for (const auto& p : rule.params) {
    auto it = given.find(p.key);
    const std::string value = it == given.end() ? p.fallback : it->second;
    if (p.kind == Kind::kChoice) {
      if (std::find(p.choices.begin(), p.choices.end(), value) == p.choices.end()) {
        std::string opts;
        for (const auto& c : p.choices) opts += (opts.empty() ? "" : "|") + c;
        throw ConfigError("policy '" + spec.name_ + "': " + p.key + " must be one of " + opts);
      }
      spec.params_[p.key] = value;
      continue;
    }
    const double v = parse_number(p.key, value);
    if (p.kind == Kind::kInteger && std::floor(v) != v) {
      throw ConfigError("policy '" + spec.name_ + "': " + p.key + " must be an integer");
    }
    if (!p.valid(v)) {
      throw ConfigError("policy '" + spec.name_ + "': " + p.key + "=" + value +
                        " outside " + p.domain);
    }
    spec.params_[p.key] = format_number(v);
  }
  return spec;
}

double PolicySpec::number(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("policy '" + name_ + "' has no parameter " + key);
  return std::stod(it->second);
}

const std::string& PolicySpec::text(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("policy '" + name_ + "' has no parameter " + key);
  return it->second;
}

std::string PolicySpec::params_string() const {
  std::string out;
  for (const auto& [k, v] : params_) {
    // The unused epsilon knob of each LR schedule is left out.
    if (name_ == "lr" && ((k == "beta" && params_.at("schedule") == "const") ||
                          (k == "eps" && params_.at("schedule") == "dec"))) {
      continue;
    }
    out += (out.empty() ? "" : ",") + k + "=" + v;
  }
  return out;
}

std::string PolicySpec::canonical() const {
  const auto p = params_string();
  return p.empty() ? name_ : name_ + ":" + p;
}

bool PolicySpec::requires_user() const { return rule_for(name_).requires_user; }
bool PolicySpec::stochastic() const { return rule_for(name_).stochastic; }
bool PolicySpec::uses_summarizer() const { return rule_for(name_).summarizer; }

bool PolicySpec::out_of_grid() const {
  for (const auto& p : rule_for(name_).params) {
    if (p.kind == Kind::kChoice) continue;
    if (name_ == "lr" && ((p.key == "beta" && text("schedule") == "const") ||
                          (p.key == "eps" && text("schedule") == "dec"))) {
      continue;
    }
    if (!on_grid(number(p.key), p.grid)) return true;
  }
  return false;
}

const SentenceScores& SummaryCache::get(const std::string& method) {
  auto it = normalized_.find(method);
  if (it != normalized_.end()) return it->second;
  auto scores = summarizer_scores(method, *doc_);
  if (!scores.normalized) scores = normalize_unit_interval(scores);
  return normalized_.emplace(method, std::move(scores)).first->second;
}

std::unique_ptr<PolicySession> make_policy(const PolicySpec& spec, const PolicyContext& ctx) {
  const auto& name = spec.name();
  const std::size_t n = ctx.doc.size();
  if (spec.requires_user() && ctx.user == nullptr) {
    throw ConfigError("policy '" + name + "' needs privileged access to the user model");
  }
  const auto summary = [&]() -> SentenceScores {
    const auto& method = spec.text("summarizer");
    if (ctx.summaries) return ctx.summaries->get(method);
    return normalize_unit_interval(summarizer_scores(method, ctx.doc));
  };

  if (name == "control") return make_control(n);
  if (name == "show_modulo") return make_show_modulo(n, static_cast<std::size_t>(spec.number("k")));
  if (name == "hide_next") return make_hide_next(n, static_cast<std::size_t>(spec.number("n")));
  if (name == "hide_next_similar") return make_hide_next_similar(ctx.doc, spec.number("threshold"));
  if (name == "hide_all_similar") return make_hide_all_similar(ctx.doc, spec.number("threshold"));
  if (name == "gen_fixed") return make_gen_fixed(summary(), spec.number("frac"));
  if (name == "gen_dynamic") return make_gen_dynamic(summary(), spec.number("eps"), ctx.seed);
  if (name == "lr") {
    LrOptions opt;
    opt.schedule = spec.text("schedule") == "dec" ? ExplorationSchedule::kDecreasing
                                                  : ExplorationSchedule::kConstant;
    opt.epsilon = spec.number("eps");
    opt.beta = spec.number("beta");
    return make_lr(ctx.doc, opt, ctx.seed);
  }
  if (name == "coverage_opt") {
    CoverageOptOptions opt;
    opt.concepts = static_cast<std::size_t>(spec.number("k"));
    opt.beta = spec.number("beta");
    opt.initial_evidence = spec.number("c");
    return make_coverage_opt(ctx.doc, opt, ctx.seed);
  }
  if (name == "oracle_greedy") return make_oracle_greedy(*ctx.user, ctx.doc);
  if (name == "oracle_sorted") return make_oracle_sorted(*ctx.user, ctx.doc);
  if (name == "oracle_uniform") return make_oracle_uniform(*ctx.user, n, ctx.seed);
  throw ConfigError("unknown policy '" + name + "'");
}

}  // namespace hare
