#include <random>

#include <benchmark/benchmark.h>

#include "bgk/dlra_solver.hpp"
#include "bgk/full_solver.hpp"
#include "bgk/random_state.hpp"

using namespace bgk;

namespace {

PhaseSpace space_1d(int n_x, int n_v) {
  return make_phase_space_1d(SpatialGrid::uniform(-1.0, 1.0, n_x), gauss_hermite_rule(n_v));
}

PhaseSpace space_2d(int n_x, int n_v) {
  const auto g = SpatialGrid::uniform(-1.0, 1.0, n_x);
  return make_phase_space_2d(g, g, n_v, n_v);
}

void BM_FullStep1D(benchmark::State& state) {
  const PhaseSpace ps = space_1d(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::mt19937_64 rng(1);
  FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.99);
  for (auto _ : state) {
    s = full_step(ps, s, SchemeVariant::StableConservative, 1.0, dt);
    benchmark::DoNotOptimize(s.g.data());
  }
}
BENCHMARK(BM_FullStep1D)->Args({400, 128})->Args({1000, 500})->Unit(benchmark::kMillisecond);

void BM_FullStep2D(benchmark::State& state) {
  const PhaseSpace ps = space_2d(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::mt19937_64 rng(2);
  FullState s = random_normalized_state(ps, rng);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.7, true);
  for (auto _ : state) {
    s = full_step(ps, s, SchemeVariant::StableConservative, 1.0, dt);
    benchmark::DoNotOptimize(s.g.data());
  }
}
BENCHMARK(BM_FullStep2D)->Args({64, 16})->Unit(benchmark::kMillisecond);

// Args: dimension, n_x, n_v, rank. rmax pins the rank.
void BM_DlraStep(benchmark::State& state) {
  const int n_x = static_cast<int>(state.range(1));
  const int n_v = static_cast<int>(state.range(2));
  const Eigen::Index r = state.range(3);
  const PhaseSpace ps = state.range(0) == 1 ? space_1d(n_x, n_v) : space_2d(n_x, n_v);
  std::mt19937_64 rng(3);
  const FullState s = random_normalized_state(ps, rng);
  const LowRankState lr = low_rank_from_dense(s.rho, s.g, r);
  const double dt = cfl_timestep(ps.min_dx(), ps.velocity.v_cap, 0.7, true);
  for (auto _ : state) {
    LowRankState next = dlra_step(ps, lr, 1.0, dt, AugmentationMode::Reduced2r, {0.0, r, true});
    benchmark::DoNotOptimize(next.s_core.data());
  }
}
BENCHMARK(BM_DlraStep)
    ->Args({1, 400, 128, 20})
    ->Args({1, 1000, 500, 76})
    ->Args({2, 64, 16, 30})
    ->Args({2, 64, 16, 100})
    ->Unit(benchmark::kMillisecond);

void BM_ConservativeTruncation(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::Index r = state.range(1);
  const VelocityGrid vg = gauss_hermite_rule(128);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
  };
  const Eigen::MatrixXd x = orthonormalize(gaussian(n, r)).q;
  const Eigen::MatrixXd v = orthonormalize(gaussian(128, r)).q;
  const Eigen::MatrixXd s = gaussian(r, r);
  for (auto _ : state) {
    TruncationResult tr = truncate_conservative(x, s, v, vg, {1e-5, 200, true});
    benchmark::DoNotOptimize(tr.factors.s.data());
  }
}
BENCHMARK(BM_ConservativeTruncation)->Args({400, 40})->Args({4096, 100})->Unit(benchmark::kMillisecond);

void BM_GaussHermiteRule(benchmark::State& state) {
  for (auto _ : state) {
    VelocityGrid vg = gauss_hermite_rule(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(vg.w_half.data());
  }
}
BENCHMARK(BM_GaussHermiteRule)->Arg(32)->Arg(128)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
