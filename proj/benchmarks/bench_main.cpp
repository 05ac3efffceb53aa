#include <benchmark/benchmark.h>

#include "gensc/rng.hpp"
#include "gensc/scores.hpp"
#include "gensc/selection.hpp"

using namespace gensc;

namespace {

EvalSet random_set(std::size_t n, std::size_t k, std::size_t d) {
  Rng rng(11);
  EvalSet set;
  set.logits.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < set.logits.size(); ++i) set.logits.data()[i] = 2.0 * rng.normal();
  if (d > 0) {
    Matrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = rng.normal();
    set.features = std::move(f);
  }
  for (std::size_t i = 0; i < n; ++i) {
    set.labels.push_back(static_cast<int>(i % k));
    set.tags.push_back(ShiftTag::kInD);
  }
  return set;
}

void BM_ScoreSet(benchmark::State& state, ScoreId id) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto set = random_set(n, 100, 32);
  ClassifierHead head;
  head.weight_norms = Vector::Ones(100);
  scores::ContextOptions opts;
  opts.seed = 1;
  const auto ctx = scores::prepare_context(set, &head, id, opts);
  for (auto _ : state) benchmark::DoNotOptimize(scores::score_set(set, id, ctx));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

void BM_RcCurveAndAurc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto set = random_set(n, 10, 0);
  const auto s = scores::score_set(set, ScoreId::kSrMax, {});
  const auto loss = selection::losses(set);
  for (auto _ : state) {
    const auto curve = selection::rc_curve(s.values, loss);
    benchmark::DoNotOptimize(selection::aurc(curve));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ScoreSet, sr_max, ScoreId::kSrMax)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ScoreSet, sr_ent, ScoreId::kSrEnt)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ScoreSet, geo_margin, ScoreId::kGeoMargin)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ScoreSet, energy, ScoreId::kEnergy)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ScoreSet, knn, ScoreId::kKnn)->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(BM_ScoreSet, vim, ScoreId::kVim)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ScoreSet, sirc, ScoreId::kSirc)->Arg(1000)->Arg(10000);
BENCHMARK(BM_RcCurveAndAurc)->Arg(1000)->Arg(100000);

BENCHMARK_MAIN();
