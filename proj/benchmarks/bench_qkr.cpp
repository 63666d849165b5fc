#include <benchmark/benchmark.h>

#include <vector>

#include "qkr/channel.hpp"
#include "qkr/closedform.hpp"
#include "qkr/specfun.hpp"

namespace {

void BM_BesselRow(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  const int m_max = qkr::bessel_order_cutoff(x);
  for (auto _ : state) benchmark::DoNotOptimize(qkr::bessel_j_row(x, m_max));
}
BENCHMARK(BM_BesselRow)->Arg(1)->Arg(100)->Arg(10000);

void BM_FloquetApply(benchmark::State& state) {
  const auto window = qkr::BasisWindow::symmetric(state.range(0));
  const auto u = qkr::build_floquet(0.2, qkr::ResonanceOrder(1, 3), window);
  Eigen::MatrixXcd in = Eigen::MatrixXcd::Random(window.size(), window.size());
  Eigen::MatrixXcd out;
  for (auto _ : state) {
    u.apply_columns(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * window.size() * window.size());
}
BENCHMARK(BM_FloquetApply)->Arg(64)->Arg(136)->Arg(512);

void BM_KrausStep(benchmark::State& state) {
  const auto window = qkr::BasisWindow::symmetric(state.range(0));
  const qkr::ResonanceOrder res(1, 3);
  const auto u1 = qkr::build_floquet(0.1, res, window);
  const auto u2 = qkr::build_floquet(0.2, res, window);
  auto rho = qkr::DensityMatrix::pure_momentum(window, 0);
  for (int k = 0; k < 20; ++k) rho = qkr::kraus_step(rho, u1, u2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(qkr::kraus_step(rho, u1, u2, 0.3));
}
BENCHMARK(BM_KrausStep)->Arg(136)->Arg(256);

void BM_CoherenceExact(benchmark::State& state) {
  const qkr::KrausChannel ch(1000.1, 0.1, 0.5);
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(qkr::coherence_exact(n, ch));
}
BENCHMARK(BM_CoherenceExact)->Arg(100)->Arg(1000)->Arg(10000);

void BM_MonteCarlo(benchmark::State& state) {
  const qkr::KrausChannel ch(0.5, 1.3, 0.3);
  const std::vector<long> times{30};
  for (auto _ : state) benchmark::DoNotOptimize(qkr::monte_carlo_evolve(ch, 30, state.range(0), 7, times));
}
BENCHMARK(BM_MonteCarlo)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
