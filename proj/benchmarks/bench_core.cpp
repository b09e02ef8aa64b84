#include <benchmark/benchmark.h>

#include "gdlab/distribution.hpp"
#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"
#include "gdlab/rng.hpp"

namespace {

using namespace gdlab;

void BM_CrossEntropyGradient(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto loss = make_cross_entropy(k, 1.0);
  RandomStream rng(1);
  const Eigen::VectorXd logits = rng.box_vector(k, 5.0);
  Eigen::VectorXd grad(k);
  double val;
  for (auto _ : state) {
    loss.value_and_gradient_logits(logits, 0, val, grad);
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(BM_CrossEntropyGradient)->RangeMultiplier(4)->Range(2, 128);

void BM_SumUnivariateGradient(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto loss =
      make_sum_univariate(k, make_phi_quadratic_tail(make_exponential_tail(1.0)));
  RandomStream rng(1);
  const Eigen::VectorXd logits = rng.box_vector(k, 5.0);
  Eigen::VectorXd grad(k);
  double val;
  for (auto _ : state) {
    loss.value_and_gradient_logits(logits, 0, val, grad);
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(BM_SumUnivariateGradient)->RangeMultiplier(4)->Range(2, 128);

void BM_GDRunHardInstance(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto dist = make_hard_lower_n(0.125, 2000, k);
  const Dataset data = sample(dist, 2000, 3);
  const auto loss =
      make_sum_univariate(k, make_phi_quadratic_tail(make_exponential_tail(1.0)));
  GDConfig cfg;
  cfg.eta = default_step_size(1.0, k, 2.0);
  cfg.T = 200;
  cfg.record_every = 200;
  for (auto _ : state) {
    auto trace = gd_run(loss, data, cfg);
    benchmark::DoNotOptimize(trace.final_w);
  }
}
BENCHMARK(BM_GDRunHardInstance)->RangeMultiplier(2)->Range(4, 64)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
