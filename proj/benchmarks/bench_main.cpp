#include <benchmark/benchmark.h>

#include <random>

#include "wordprob/decoding.hpp"
#include "wordprob/normcheck.hpp"
#include "wordprob/regress.hpp"
#include "wordprob/synthetic.hpp"

using namespace wordprob;

namespace {

const synthetic::Corpus& corpus() {
  static const auto c = synthetic::make_garden_path_corpus(7);
  return c;
}

const NGramModel& scorer() {
  static const auto m = synthetic::train_scorer(corpus());
  return m;
}

void BM_ScoreSentence(benchmark::State& state) {
  const auto& s = corpus().items.front();
  for (auto _ : state) benchmark::DoNotOptimize(score_sentence(scorer(), s.seg, s.sid));
}
BENCHMARK(BM_ScoreSentence);

void BM_ScoreFromRecord(benchmark::State& state) {
  const auto& s = corpus().items.front();
  const auto rec = make_record(scorer(), s.seg, s.sid);
  for (auto _ : state) benchmark::DoNotOptimize(score_from_records(rec));
}
BENCHMARK(BM_ScoreFromRecord);

void BM_EnumerateGarden(benchmark::State& state) {
  const auto g = garden_table();
  const std::vector<TokenId> eps;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_omega_partial(g, eps, state.range(0), Variant::WT));
  }
}
BENCHMARK(BM_EnumerateGarden)->Arg(50)->Arg(200);

void BM_EnumerateBranching(benchmark::State& state) {
  std::vector<std::string> s{"\xE2\x96\x81" "a", "\xE2\x96\x81" "b", "x", "y", "z"};
  const UniformModel u(std::make_shared<const Vocabulary>(Vocabulary::from_surfaces(s)));
  const std::vector<TokenId> eps;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_omega_partial(u, eps, state.range(0), Variant::WT));
  }
}
BENCHMARK(BM_EnumerateBranching)->Arg(6)->Arg(9);

void BM_FitOls(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t p = 10;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < p; ++c) names.push_back("x" + std::to_string(c));
  std::vector<double> v(n * p), y(n);
  for (auto& e : v) e = z(rng);
  for (auto& e : y) e = z(rng);
  const DesignMatrix X(names, v, y);
  for (auto _ : state) benchmark::DoNotOptimize(fit_ols(X));
}
BENCHMARK(BM_FitOls)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
