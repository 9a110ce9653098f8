#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "hare/corpus.hpp"
#include "hare/embed.hpp"
#include "hare/evalmetric.hpp"
#include "hare/policies.hpp"
#include "hare/simharness.hpp"
#include "hare/usersim.hpp"

namespace {

using namespace hare;

struct Fixture {
  Corpus corpus = load_corpus(HARE_SAMPLE_CORPUS);
  std::unique_ptr<HashedTfidfProvider> provider = make_hashed_provider(corpus);
  std::vector<EmbeddedDocument> docs;
  std::vector<SimulatedUser> users;

  Fixture() {
    Rng rng(3);
    for (const auto& d : corpus.documents) {
      if (d.size() < 34) continue;
      Document cut{d.id, {d.sentences.begin(), d.sentences.begin() + 34}};
      docs.push_back(provider->embed_document(cut));
      users.push_back(sample_user(docs.back(), kDefaultUserConcepts, 0.1, rng));
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

// One simulated session on a 34-sentence article, policy construction included.
void BM_Session(benchmark::State& state, const std::string& spec_text) {
  const auto& f = fixture();
  const auto spec = PolicySpec::parse(spec_text);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& doc = f.docs[i % f.docs.size()];
    const auto& user = f.users[i % f.users.size()];
    SummaryCache cache(doc);
    auto policy = make_policy(spec, {doc, &user, i, &cache});
    Rng rng(i);
    benchmark::DoNotOptimize(run_session(doc, user, *policy, rng));
    ++i;
  }
}

BENCHMARK_CAPTURE(BM_Session, control, std::string("control"));
BENCHMARK_CAPTURE(BM_Session, hide_next, std::string("hide_next:n=2"));
BENCHMARK_CAPTURE(BM_Session, hide_all_similar, std::string("hide_all_similar:threshold=0.5"));
BENCHMARK_CAPTURE(BM_Session, hide_next_similar, std::string("hide_next_similar:threshold=0.5"));
BENCHMARK_CAPTURE(BM_Session, gen_fixed_lexrank, std::string("gen_fixed:summarizer=lexrank,frac=0.5"));
BENCHMARK_CAPTURE(BM_Session, gen_dynamic_textrank, std::string("gen_dynamic:summarizer=textrank,eps=0.2"));
BENCHMARK_CAPTURE(BM_Session, lr, std::string("lr:schedule=const,eps=0.3"));
BENCHMARK_CAPTURE(BM_Session, coverage_opt, std::string("coverage_opt:beta=1,c=2"));
BENCHMARK_CAPTURE(BM_Session, greedy, std::string("greedy"));

void BM_CoverageScore(benchmark::State& state) {
  const auto& f = fixture();
  const auto& doc = f.docs.front();
  const auto r = importances(f.users.front().interests, doc);
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < doc.size(); i += 3) s.push_back(i);
  for (auto _ : state) benchmark::DoNotOptimize(coverage_score(r, doc, s));
}
BENCHMARK(BM_CoverageScore);

void BM_EmbedDocument(benchmark::State& state) {
  const auto& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.provider->embed_document(f.corpus.documents[i++ % f.corpus.size()]));
  }
}
BENCHMARK(BM_EmbedDocument);

}  // namespace

BENCHMARK_MAIN();
