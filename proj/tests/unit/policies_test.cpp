#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hare/errors.hpp"
#include "hare/evalmetric.hpp"
#include "hare/policies.hpp"
#include "hare/simharness.hpp"
#include "test_support.hpp"

namespace hare {
namespace {

using testing::embedded;
using testing::logistic;

// Runs a policy over the whole document, feeding `fb(i)` for shown sentences.
std::vector<Decision> drive(PolicySession& p, const std::function<int(std::size_t)>& fb) {
  std::vector<Decision> out;
  for (std::size_t i = 0; i < p.doc_size(); ++i) {
    out.push_back(p.decide(i));
    if (out.back() == Decision::kShow) p.observe(i, fb(i));
  }
  return out;
}

std::vector<std::size_t> shown(const std::vector<Decision>& d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == Decision::kShow) out.push_back(i);
  }
  return out;
}

std::set<std::size_t> hidden(const std::vector<Decision>& d) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == Decision::kHide) out.insert(i);
  }
  return out;
}

const auto accept_all = [](std::size_t) { return 1; };
const auto reject_all = [](std::size_t) { return 0; };

// --- Session protocol ----------------------------------------------------------

TEST(PolicySession, DecideMustBeInOrder) {
  auto p = make_control(5);
  EXPECT_THROW(p->decide(1), ContractViolation);
  p->decide(0);
  EXPECT_THROW(p->decide(0), ContractViolation);
  p->observe(0, 1);
  p->decide(1);
  EXPECT_THROW(p->decide(5), ContractViolation);
  EXPECT_EQ(p->cursor(), 2u);
}

TEST(PolicySession, ObserveOnlyShownOnceWithBinaryFeedback) {
  auto p = make_show_modulo(6, 2);
  EXPECT_THROW(p->observe(0, 1), ContractViolation);  // not decided yet
  ASSERT_EQ(p->decide(0), Decision::kShow);
  EXPECT_THROW(p->observe(0, 2), ContractViolation);
  p->observe(0, 1);
  EXPECT_THROW(p->observe(0, 1), ContractViolation);
  ASSERT_EQ(p->decide(1), Decision::kHide);
  EXPECT_THROW(p->observe(1, 0), ContractViolation);
}

// --- Heuristics -------------------------------------------------------------------

TEST(Control, ShowsEverything) {
  auto p = make_control(7);
  EXPECT_EQ(shown(drive(*p, reject_all)).size(), 7u);
}

TEST(ShowModulo, EveryKthFromIndexZero) {
  auto p = make_show_modulo(10, 2);
  EXPECT_EQ(shown(drive(*p, reject_all)), (std::vector<std::size_t>{0, 2, 4, 6, 8}));
  auto one = make_show_modulo(10, 1);
  auto ctl = make_control(10);
  EXPECT_EQ(drive(*one, reject_all), drive(*ctl, reject_all));
  EXPECT_THROW(make_show_modulo(10, 0), ConfigError);
}

TEST(HideNext, HidesTheNAfterARejection) {
  auto p = make_hide_next(10, 2);
  const auto d = drive(*p, [](std::size_t i) { return i == 3 ? 0 : 1; });
  EXPECT_EQ(hidden(d), (std::set<std::size_t>{4, 5}));
}

TEST(HideNext, AcceptsHideNothing) {
  auto p = make_hide_next(10, 3);
  EXPECT_TRUE(hidden(drive(*p, accept_all)).empty());
}

TEST(HideNext, ConsecutiveRejectionWindows) {
  auto p = make_hide_next(12, 2);
  const auto d = drive(*p, [](std::size_t i) { return (i == 3 || i == 6) ? 0 : 1; });
  EXPECT_EQ(hidden(d), (std::set<std::size_t>{4, 5, 7, 8}));
}

TEST(HideNext, ServiceExampleNextShownAfterRejectAtThree) {
  auto p = make_hide_next(10, 2);
  const auto d = drive(*p, [](std::size_t i) { return i == 3 ? 0 : 1; });
  EXPECT_EQ(d[6], Decision::kShow);
}

TEST(HideAllSimilar, UnreachableThresholdIsControl) {
  Rng rng(4);
  const auto doc = testing::random_nonnegative(12, 6, rng);
  auto p = make_hide_all_similar(doc, 1.0 + 1e-9);
  EXPECT_TRUE(hidden(drive(*p, reject_all)).empty());
}

TEST(HideAllSimilar, ZeroThresholdHidesEverythingAfterFirstRejection) {
  Rng rng(5);
  const auto doc = testing::random_nonnegative(12, 6, rng);
  auto p = make_hide_all_similar(doc, 0.0);
  const auto d = drive(*p, [](std::size_t i) { return i == 2 ? 0 : 1; });
  EXPECT_EQ(shown(d), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(HideAllSimilar, AnyRejectedSentenceCounts) {
  const auto doc = embedded({{1, 0, 0}, {0, 1, 0}, {0.1, 1, 0}, {1, 0.1, 0}, {0, 0, 1}});
  auto p = make_hide_all_similar(doc, 0.5);
  const auto d = drive(*p, reject_all);
  EXPECT_EQ(hidden(d), (std::set<std::size_t>{2, 3}));
}

// Four sentences after the rejected one with similarities 0.9, 0.8, 0.3, 0.9.
EmbeddedDocument chain_fixture() {
  const auto at = [](double cos) { return std::vector<double>{cos, std::sqrt(1 - cos * cos)}; };
  return embedded({{1, 0}, at(0.9), at(0.8), at(0.3), at(0.9)});
}

TEST(HideNextSimilar, StopsAtFirstDissimilarSentence) {
  const auto doc = chain_fixture();
  auto p = make_hide_next_similar(doc, 0.5);
  const auto d = drive(*p, [](std::size_t i) { return i == 0 ? 0 : 1; });
  EXPECT_EQ(hidden(d), (std::set<std::size_t>{1, 2}));
  auto all = make_hide_all_similar(doc, 0.5);
  EXPECT_EQ(hidden(drive(*all, [](std::size_t i) { return i == 0 ? 0 : 1; })),
            (std::set<std::size_t>{1, 2, 4}));
}

TEST(HideNextSimilar, UnitThresholdIsControl) {
  const auto doc = chain_fixture();
  auto p = make_hide_next_similar(doc, 1.0);
  EXPECT_TRUE(hidden(drive(*p, reject_all)).empty());
}

TEST(HideNextSimilar, HiddenSetWithinHideAllSimilarForOneRejection) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto doc = testing::random_nonnegative(15, 5, rng);
    const double threshold = rng.uniform();
    const auto reject_at = static_cast<std::size_t>(rng.uniform_int(0, 14));
    const auto fb = [&](std::size_t i) { return i == reject_at ? 0 : 1; };
    auto next = make_hide_next_similar(doc, threshold);
    auto all = make_hide_all_similar(doc, threshold);
    const auto hn = hidden(drive(*next, fb));
    const auto ha = hidden(drive(*all, fb));
    EXPECT_TRUE(std::includes(ha.begin(), ha.end(), hn.begin(), hn.end()));
  }
}

TEST(HideNextSimilar, ContainmentCanFailOnceTheShownSetsDiverge) {
  // 0 rejected; 2 is similar to 0 so only hide_all_similar hides it;
  // hide_next_similar shows and rejects 2, then hides 3 (similar to 2 only).
  const auto doc = embedded({{1, 0, 0}, {0, 0, 1}, {0.8, 0.6, 0}, {0, 1, 0.05}});
  const auto fb = [](std::size_t i) { return i == 1 ? 1 : 0; };
  auto next = make_hide_next_similar(doc, 0.5);
  auto all = make_hide_all_similar(doc, 0.5);
  EXPECT_EQ(hidden(drive(*next, fb)), (std::set<std::size_t>{3}));
  EXPECT_EQ(hidden(drive(*all, fb)), (std::set<std::size_t>{2}));
}

// --- Summarizer-driven -----------------------------------------------------------

TEST(GenFixed, TopFractionByScore) {
  auto p = make_gen_fixed({"x", {0.9, 0.1, 0.5, 0.7}, true}, 0.5);
  EXPECT_EQ(shown(drive(*p, reject_all)), (std::vector<std::size_t>{0, 3}));
}

TEST(GenFixed, FullFractionIsControlAndTiesPreferEarlier) {
  auto full = make_gen_fixed({"x", {0.2, 0.4, 0.1}, true}, 1.0);
  EXPECT_EQ(shown(drive(*full, reject_all)).size(), 3u);
  auto ties = make_gen_fixed({"x", {0.5, 0.5, 0.5, 0.5}, true}, 0.5);
  EXPECT_EQ(shown(drive(*ties, reject_all)), (std::vector<std::size_t>{0, 1}));
  // ceil(0.75 * 4) is exactly 3.
  auto three = make_gen_fixed({"x", {0.1, 0.2, 0.3, 0.4}, true}, 0.75);
  EXPECT_EQ(shown(drive(*three, reject_all)), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(make_gen_fixed({"x", {1}, true}, 0.0), ConfigError);
  EXPECT_THROW(make_gen_fixed({"x", {1}, true}, 1.5), ConfigError);
}

TEST(GenDynamic, ShowsEverythingBeforeAnyRejection) {
  auto p = make_gen_dynamic({"x", {0.0, 0.3, 0.1, 0.9}, true}, 0.0, 1);
  EXPECT_EQ(shown(drive(*p, accept_all)).size(), 4u);
}

TEST(GenDynamic, ThresholdIsMeanOfRejectedScores) {
  auto p = make_gen_dynamic({"x", {0.2, 0.4, 0.1, 0.35, 0.31, 0.29}, true}, 0.0, 1);
  const auto d = drive(*p, [](std::size_t i) { return i <= 1 ? 0 : 1; });
  // After rejecting 0.2 and 0.4 the threshold is 0.3.
  EXPECT_EQ(d, (std::vector<Decision>{Decision::kShow, Decision::kShow, Decision::kHide,
                                      Decision::kShow, Decision::kShow, Decision::kHide}));
}

TEST(GenDynamic, FullExplorationIsControl) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    SentenceScores s{"x", testing::random_importances(20, rng), false};
    auto p = make_gen_dynamic(s, 1.0, static_cast<std::uint64_t>(t));
    EXPECT_TRUE(hidden(drive(*p, reject_all)).empty());
  }
  EXPECT_THROW(make_gen_dynamic({"x", {1}, true}, 1.1, 0), ConfigError);
}

// --- LR ---------------------------------------------------------------------------

TEST(Lr, ExplorationSchedules) {
  LrOptions dec;
  dec.schedule = ExplorationSchedule::kDecreasing;
  dec.beta = 2.0;
  EXPECT_DOUBLE_EQ(exploration_probability(dec, 0, 8), 1.0);
  EXPECT_DOUBLE_EQ(exploration_probability(dec, 6, 8), 0.0625);
  LrOptions cst;
  cst.epsilon = 0.3;
  EXPECT_DOUBLE_EQ(exploration_probability(cst, 5, 8), 0.3);
}

TEST(Lr, ShowsEverythingUntilBothLabelsSeen) {
  Rng rng(6);
  const auto doc = testing::random_nonnegative(25, 8, rng);
  LrOptions opt;
  opt.epsilon = 0.0;
  auto only_rejects = make_lr(doc, opt, 1);
  EXPECT_TRUE(hidden(drive(*only_rejects, reject_all)).empty());
  auto only_accepts = make_lr(doc, opt, 1);
  EXPECT_TRUE(hidden(drive(*only_accepts, accept_all)).empty());
}

TEST(Lr, LearnsToHideARejectedTopic) {
  // Two orthogonal topics alternate; topic B is always rejected.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) rows.push_back(i % 2 == 0 ? std::vector<double>{1, 0.05, 0}
                                                          : std::vector<double>{0, 0.05, 1});
  const auto doc = embedded(rows);
  LrOptions opt;
  opt.epsilon = 0.0;
  auto p = make_lr(doc, opt, 1);
  const auto d = drive(*p, [](std::size_t i) { return i % 2 == 0 ? 1 : 0; });
  const auto h = hidden(d);
  EXPECT_FALSE(h.empty());
  for (std::size_t i : h) EXPECT_EQ(i % 2, 1u);
}

TEST(Lr, FullExplorationIsControl) {
  Rng rng(7);
  const auto doc = testing::random_nonnegative(20, 8, rng);
  LrOptions opt;
  opt.epsilon = 1.0;
  auto p = make_lr(doc, opt, 3);
  EXPECT_TRUE(hidden(drive(*p, [](std::size_t i) { return static_cast<int>(i % 2); })).empty());
  LrOptions bad;
  bad.epsilon = -0.1;
  EXPECT_THROW(make_lr(doc, bad, 0), ConfigError);
  LrOptions bad_beta;
  bad_beta.schedule = ExplorationSchedule::kDecreasing;
  bad_beta.beta = 0.0;
  EXPECT_THROW(make_lr(doc, bad_beta, 0), ConfigError);
}

// --- CoverageOpt --------------------------------------------------------------------

TEST(CoverageOpt, ConceptImportanceArithmetic) {
  EXPECT_EQ(concept_importance(0.0, 1.0), 0.5);
  EXPECT_EQ(concept_importance(0.0, 4.0), 0.5);
  EXPECT_NEAR(concept_importance(2.0, 1.0), 0.8808, 1e-4);
  EXPECT_NEAR(concept_importance(1.0, 1.0), 0.7311, 1e-4);
  EXPECT_NEAR(concept_importance(3.0, 2.0), logistic(1.5), 1e-15);
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double c = concept_importance(-10.0 + 0.2 * i, 1.0);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(CoverageOpt, WorkedRejectionTrace) {
  // Each sentence is its own concept, so concepts(x) is a one-hot vector.
  const auto doc = testing::orthonormal(4);
  auto p = make_coverage_opt(doc, {4, 1.0, 2.0}, 9);
  for (double c : p->state().concept_importance) EXPECT_NEAR(c, logistic(2.0), 1e-12);
  const auto& rel = p->concept_relevance(0);
  const auto hot = static_cast<std::size_t>(std::max_element(rel.begin(), rel.end()) - rel.begin());
  EXPECT_NEAR(rel[hot], 1.0, 1e-12);
  ASSERT_EQ(p->decide(0), Decision::kShow);
  p->observe(0, 0);
  for (std::size_t j = 0; j < 4; ++j) {
    if (j == hot) {
      EXPECT_NEAR(p->state().cfsum[j], 1.0, 1e-12);
      EXPECT_NEAR(p->state().concept_importance[j], 0.7311, 1e-4);
    } else {
      EXPECT_NEAR(p->state().cfsum[j], 2.0, 1e-12);
      EXPECT_NEAR(p->state().concept_importance[j], logistic(2.0), 1e-12);
    }
  }
}

TEST(CoverageOpt, AcceptsRaiseAndRejectsLowerConceptImportance) {
  Rng rng(10);
  for (int t = 0; t < 40; ++t) {
    const auto doc = testing::random_nonnegative(20, 6, rng);
    auto p = make_coverage_opt(doc, {4, 2.0, 1.0}, static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (p->decide(i) != Decision::kShow) continue;
      const auto before = p->state().concept_importance;
      const int fb = rng.bernoulli(0.5) ? 1 : 0;
      for (double r : p->concept_relevance(i)) EXPECT_GE(r, 0.0);
      p->observe(i, fb);
      const auto& after = p->state().concept_importance;
      for (std::size_t j = 0; j < before.size(); ++j) {
        if (fb == 1) {
          EXPECT_GE(after[j], before[j]);
        } else {
          EXPECT_LE(after[j], before[j]);
        }
      }
    }
  }
}

TEST(CoverageOpt, RejectionsShrinkLengthEstimate) {
  Rng rng(11);
  const auto doc = testing::random_nonnegative(20, 6, rng);
  auto p = make_coverage_opt(doc, {4, 4.0, 5.0}, 1);
  EXPECT_EQ(p->state().length_fraction, 1.0);
  const auto d = drive(*p, reject_all);
  EXPECT_LT(p->state().length_fraction, 1.0);
  EXPECT_GE(p->state().length_fraction, 0.0);
  EXPECT_EQ(d[0], Decision::kShow);
  EXPECT_THROW(make_coverage_opt(testing::orthonormal(3), {4, 1.0, 1.0}, 0), TooFewPoints);
  EXPECT_THROW(make_coverage_opt(doc, {4, 0.0, 1.0}, 0), ConfigError);
}

TEST(CoverageOpt, AcceptAllShowsEverything) {
  Rng rng(12);
  const auto doc = testing::random_nonnegative(20, 6, rng);
  auto p = make_coverage_opt(doc, {4, 4.0, 5.0}, 1);
  EXPECT_TRUE(hidden(drive(*p, accept_all)).empty());
}

// --- Oracles -------------------------------------------------------------------------

SimulatedUser user_for(const EmbeddedDocument& doc, std::size_t l,
                       std::vector<WeightedConcept> concepts) {
  auto u = testing::user_with(l, doc.size());
  u.interests.concepts = std::move(concepts);
  return u;
}

TEST(OracleGreedy, OrthonormalExample) {
  const auto doc = testing::orthonormal(3);
  const std::vector<double> r = {1.0, 0.9, 0.1};
  const auto sel = greedy_coverage_selection(r, doc, 2);
  EXPECT_EQ(sel, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(coverage_score(r, doc, sel), 95.0, 1e-12);
  // Independent check: best over every 2-subset.
  double best = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      const std::vector<std::size_t> s = {a, b};
      best = std::max(best, coverage_score(r, doc, s));
    }
  }
  EXPECT_NEAR(best, 95.0, 1e-12);
}

TEST(OracleGreedy, FullBudgetShowsEverything) {
  Rng rng(13);
  const auto doc = testing::random_nonnegative(10, 6, rng);
  const auto r = testing::random_importances(10, rng);
  const auto sel = greedy_coverage_selection(r, doc, 10);
  // The greedy stops once nothing adds coverage, which is at full coverage.
  EXPECT_NEAR(coverage_score(r, doc, sel), 100.0, 1e-9);
}

TEST(OracleGreedy, EachStepIsTheBestSingletonExtension) {
  Rng rng(14);
  for (int t = 0; t < 30; ++t) {
    const auto doc = testing::random_nonnegative(12, 5, rng);
    const auto r = testing::random_importances(12, rng);
    std::vector<std::size_t> prefix;
    for (std::size_t l = 1; l <= 4; ++l) {
      const auto sel = greedy_coverage_selection(r, doc, l);
      const double score = coverage_score(r, doc, sel);
      for (std::size_t x = 0; x < 12; ++x) {
        auto ext = prefix;
        if (std::find(ext.begin(), ext.end(), x) != ext.end()) continue;
        ext.push_back(x);
        EXPECT_GE(score, coverage_score(r, doc, ext) - 1e-9);
      }
      prefix = sel;
    }
  }
}

TEST(OracleSorted, PicksMostImportantWithEarlierTies) {
  const auto doc = testing::orthonormal(3);
  const auto u = user_for(doc, 2, {{1.0, doc[0]}, {0.9, doc[1]}, {0.1, doc[2]}});
  auto p = make_oracle_sorted(u, doc);
  EXPECT_EQ(shown(drive(*p, reject_all)), (std::vector<std::size_t>{0, 1}));

  const auto flat = embedded({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  const auto uf = user_for(flat, 2, {{1.0, flat[0]}});
  auto q = make_oracle_sorted(uf, flat);
  EXPECT_EQ(shown(drive(*q, reject_all)), (std::vector<std::size_t>{0, 1}));
}

TEST(OracleSorted, CoverageBeatsRawInterestOnNearDuplicates) {
  // Two near-duplicate top sentences and one distinct mid sentence.
  const auto doc = embedded({{1, 0, 0}, {0.99, 0.141, 0}, {0, 0.2, 1}, {0, 1, 0}});
  const auto u = user_for(doc, 2, {{1.0, EmbeddingVector::normalized({1, 0, 0})},
                                   {0.8, EmbeddingVector::normalized({0, 0, 1})}});
  const auto r = importances(u.interests, doc);
  auto sorted = make_oracle_sorted(u, doc);
  auto greedy = make_oracle_greedy(u, doc);
  const auto s = shown(drive(*sorted, reject_all));
  const auto g = shown(drive(*greedy, reject_all));
  EXPECT_EQ(s, (std::vector<std::size_t>{0, 1}));
  EXPECT_LT(coverage_score(r, doc, s), coverage_score(r, doc, g));
  // Greedy is not exact here, but stays close to the exhaustive best.
  double best = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      const std::vector<std::size_t> sub = {a, b};
      best = std::max(best, coverage_score(r, doc, sub));
    }
  }
  EXPECT_GE(coverage_score(r, doc, g), 0.95 * best);
  EXPECT_LE(coverage_score(r, doc, g), best + 1e-12);
}

TEST(OracleUniform, FullLengthShowsEverything) {
  const auto doc = testing::orthonormal(6);
  const auto u = testing::user_with(6, 6);
  auto p = make_oracle_uniform(u, 6, 1);
  EXPECT_EQ(shown(drive(*p, reject_all)).size(), 6u);
}

TEST(OracleUniform, InclusionFrequenciesAreHalf) {
  const auto u = testing::user_with(5, 10);
  std::vector<int> counts(10, 0);
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    auto p = make_oracle_uniform(u, 10, derive_seed({99, static_cast<std::uint64_t>(t)}));
    const auto s = shown(drive(*p, reject_all));
    ASSERT_EQ(s.size(), 5u);
    for (auto i : s) ++counts[i];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.5, 0.02);
  auto a = make_oracle_uniform(u, 10, 5);
  auto b = make_oracle_uniform(u, 10, 5);
  EXPECT_EQ(drive(*a, reject_all), drive(*b, reject_all));
}

// --- Properties over every policy ------------------------------------------------------

struct Fixture {
  EmbeddedDocument doc;
  SimulatedUser user;
};

Fixture random_fixture(Rng& rng) {
  Fixture f;
  f.doc = testing::random_nonnegative(18, 6, rng);
  f.doc.document = testing::numbered_document(18);
  f.user = sample_user(f.doc, 4, 0.1, rng);
  return f;
}

TEST(Policies, NonAdaptivePoliciesIgnoreFeedback) {
  Rng rng(15);
  for (const char* spec : {"control", "show_modulo:k=3", "gen_fixed:summarizer=lexrank,frac=0.5",
                           "gen_fixed:summarizer=textrank", "gen_fixed", "oracle_greedy",
                           "oracle_sorted", "oracle_uniform"}) {
    for (int t = 0; t < 10; ++t) {
      const auto f = random_fixture(rng);
      const auto s = PolicySpec::parse(spec);
      auto a = make_policy(s, {f.doc, &f.user, 7, nullptr});
      auto b = make_policy(s, {f.doc, &f.user, 7, nullptr});
      const auto coin = derive_seed({static_cast<std::uint64_t>(t)});
      EXPECT_EQ(drive(*a, accept_all),
                drive(*b, [&](std::size_t i) { return static_cast<int>(mix64(coin + i) & 1); }))
          << spec;
    }
  }
}

TEST(Policies, DecisionsNeverDependOnLaterFeedback) {
  // Two feedback streams agreeing up to index k must produce identical
  // decisions through index k.
  Rng rng(16);
  for (const char* spec :
       {"hide_next:n=2", "hide_all_similar:threshold=0.3", "hide_next_similar:threshold=0.3",
        "gen_dynamic:eps=0.2", "lr:eps=0.1", "lr:schedule=dec,beta=2", "coverage_opt:c=1,beta=1"}) {
    for (int t = 0; t < 5; ++t) {
      const auto f = random_fixture(rng);
      const auto s = PolicySpec::parse(spec);
      const std::size_t k = 9;
      auto a = make_policy(s, {f.doc, &f.user, 3, nullptr});
      auto b = make_policy(s, {f.doc, &f.user, 3, nullptr});
      const auto da = drive(*a, [](std::size_t i) { return static_cast<int>((i * 7) % 3 == 0); });
      const auto db = drive(*b, [&](std::size_t i) {
        return i <= k ? static_cast<int>((i * 7) % 3 == 0) : 1;
      });
      EXPECT_TRUE(std::equal(da.begin(), da.begin() + k + 1, db.begin())) << spec;
    }
  }
}

// --- Policy specs ----------------------------------------------------------------------

TEST(PolicySpec, ParsesAndFillsDefaults) {
  const auto s = PolicySpec::parse("hide_all_similar:threshold=0.5");
  EXPECT_EQ(s.name(), "hide_all_similar");
  EXPECT_DOUBLE_EQ(s.number("threshold"), 0.5);
  EXPECT_EQ(PolicySpec::parse("gen_dynamic:summarizer=sumbasic,eps=0.5").canonical(),
            "gen_dynamic:eps=0.5,summarizer=sumbasic");
  EXPECT_EQ(PolicySpec::parse("lr:schedule=dec,beta=1").canonical(), "lr:beta=1,schedule=dec");
  EXPECT_EQ(PolicySpec::parse("lr").canonical(), "lr:eps=0.4,schedule=const");
  EXPECT_EQ(PolicySpec::parse("hide_next").canonical(), "hide_next:n=2");
  EXPECT_EQ(PolicySpec::parse(" control ").canonical(), "control");
  EXPECT_EQ(PolicySpec::parse("coverage_opt").canonical(), "coverage_opt:beta=4,c=5,k=4");
  EXPECT_EQ(PolicySpec::parse("gen_dynamic:epsilon=0.30").canonical(),
            "gen_dynamic:eps=0.3,summarizer=sumbasic");
}

TEST(PolicySpec, RejectsMalformedSpecs) {
  for (const char* bad :
       {"", "nope", "control:k=2", "show_modulo:k=0", "show_modulo:k=2.5", "show_modulo:k",
        "hide_next:n=abc", "hide_all_similar:threshold=1.5", "gen_fixed:frac=0",
        "gen_fixed:summarizer=luhn", "lr:schedule=sometimes", "lr:beta=-1",
        "coverage_opt:c=-1", "hide_next:n=1,n=2", "gen_dynamic:eps=nan"}) {
    EXPECT_THROW(PolicySpec::parse(bad), ConfigError) << bad;
  }
}

TEST(PolicySpec, Flags) {
  EXPECT_TRUE(PolicySpec::parse("oracle_greedy").requires_user());
  EXPECT_FALSE(PolicySpec::parse("lr").requires_user());
  EXPECT_TRUE(PolicySpec::parse("lr").stochastic());
  EXPECT_TRUE(PolicySpec::parse("gen_dynamic").stochastic());
  EXPECT_TRUE(PolicySpec::parse("oracle_uniform").stochastic());
  EXPECT_FALSE(PolicySpec::parse("gen_fixed").stochastic());
  EXPECT_FALSE(PolicySpec::parse("coverage_opt").stochastic());
  EXPECT_TRUE(PolicySpec::parse("gen_fixed").uses_summarizer());
  EXPECT_TRUE(PolicySpec::parse("coverage_opt:c=5").out_of_grid());
  EXPECT_FALSE(PolicySpec::parse("coverage_opt:c=4").out_of_grid());
  EXPECT_TRUE(PolicySpec::parse("show_modulo:k=7").out_of_grid());
  EXPECT_FALSE(PolicySpec::parse("lr:schedule=dec,beta=4").out_of_grid());
  EXPECT_TRUE(PolicySpec::parse("hide_next:n=9").out_of_grid());
}

TEST(PolicySpec, OracleNeedsUser) {
  const auto doc = testing::orthonormal(4);
  EXPECT_THROW(make_policy(PolicySpec::parse("oracle_sorted"), {doc, nullptr, 0, nullptr}),
               ConfigError);
}

TEST(SummaryCache, ReturnsNormalizedScores) {
  Rng rng(17);
  auto doc = testing::random_nonnegative(8, 6, rng);
  SummaryCache cache(doc);
  const auto& s = cache.get("lexrank");
  EXPECT_TRUE(s.normalized);
  EXPECT_DOUBLE_EQ(*std::max_element(s.scores.begin(), s.scores.end()), 1.0);
  EXPECT_EQ(&cache.get("lexrank"), &s);
}

}  // namespace
}  // namespace hare
