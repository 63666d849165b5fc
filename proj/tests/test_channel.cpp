#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "qkr/channel.hpp"
#include "qkr/errors.hpp"
#include "qkr/specfun.hpp"

using qkr::BasisWindow;
using qkr::DensityMatrix;
using qkr::KrausChannel;
using qkr::ResonanceOrder;

namespace {

std::vector<long> range(long lo, long hi) {
  std::vector<long> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

}  // namespace

TEST_CASE("channel parameters") {
  const KrausChannel ch(0.5, 1.3, 0.3);
  CHECK(ch.beta() == doctest::Approx(0.7));
  CHECK(ch.delta_kappa() == doctest::Approx(-0.8));
  CHECK(ch.resonance().is_primary());
  CHECK_THROWS_AS(KrausChannel(1.0, 2.0, 1.5), qkr::ConfigError);
  CHECK_THROWS_AS(KrausChannel(1.0, 2.0, -0.1), qkr::ConfigError);
  CHECK_THROWS_AS(KrausChannel(INFINITY, 2.0, 0.5), qkr::ConfigError);
  CHECK_NOTHROW(KrausChannel(1.0, -1.0, 0.5));
}

TEST_CASE("one Kraus step from |0><0| gives the mixed Bessel distribution") {
  const auto window = BasisWindow::symmetric(80);
  const ResonanceOrder res(1, 3);
  const auto u1 = qkr::build_floquet(1.0, res, window);
  const auto u2 = qkr::build_floquet(2.5, res, window);
  const auto rho = qkr::kraus_step(DensityMatrix::pure_momentum(window, 0), u1, u2, 0.25);
  for (long l = -20; l <= 20; ++l) {
    const double a = qkr::bessel_j(static_cast<int>(l), 1.0);
    const double b = qkr::bessel_j(static_cast<int>(l), 2.5);
    CHECK(std::abs(rho(l, l).real() - (0.25 * a * a + 0.75 * b * b)) <= 1e-15);
  }
  CHECK(std::abs(rho.trace() - 1.0) <= 1e-14);
}

TEST_CASE("kraus step matches brute-force dense products") {
  const auto window = BasisWindow::symmetric(70);
  const ResonanceOrder res(2, 5);
  const auto u1 = qkr::build_floquet(0.6, res, window);
  const auto u2 = qkr::build_floquet(1.1, res, window);
  const Eigen::MatrixXcd d1 = oracle::floquet_matrix(0.6, 2, 5, -70, 70);
  const Eigen::MatrixXcd d2 = oracle::floquet_matrix(1.1, 2, 5, -70, 70);
  auto rho = DensityMatrix::pure_momentum(window, 0);
  Eigen::MatrixXcd ref = rho.matrix();
  for (int n = 0; n < 8; ++n) {
    rho = qkr::kraus_step(rho, u1, u2, 0.4);
    ref = oracle::channel_step(ref, d1, d2, 0.4);
  }
  CHECK((rho.matrix() - ref).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("alpha = 1 keeps a pure state pure") {
  const auto window = BasisWindow::symmetric(120);
  const ResonanceOrder res(1, 3);
  const auto u1 = qkr::build_floquet(0.7, res, window);
  const auto u2 = qkr::build_floquet(3.0, res, window);
  auto rho = DensityMatrix::pure_momentum(window, 0);
  for (int n = 0; n < 20; ++n) rho = qkr::kraus_step(rho, u1, u2, 1.0);
  CHECK(std::abs(qkr::purity(rho) - 1.0) <= 1e-12);
}

TEST_CASE("equal kick strengths preserve purity") {
  const KrausChannel ch(0.9, 0.9, 0.37, ResonanceOrder(1, 3));
  const auto times = range(0, 40);
  const auto rec = qkr::evolve(ch, 40, times);
  for (double c : rec.coherence) CHECK(std::abs(c - 1.0) <= 1e-12);
}

TEST_CASE("edge mass and window growth") {
  const auto window = BasisWindow::symmetric(10);
  auto rho = DensityMatrix::pure_momentum(window, 9);
  const auto em = qkr::edge_mass(qkr::momentum_distribution(rho), 2);
  CHECK(em.lower == 0.0);
  CHECK(em.upper == 1.0);
  const auto grown = qkr::grow_window(rho, 1e-12, 2, 5);
  CHECK(grown.window().l_min() == -10);
  CHECK(grown.window().l_max() == 15);
  CHECK(grown(9, 9).real() == 1.0);
  CHECK(grown.trace() == 1.0);

  const auto centred = DensityMatrix::pure_momentum(window, 0);
  CHECK(qkr::grow_window(centred, 1e-12, 2, 5).window() == window);
  CHECK_THROWS_AS(qkr::grow_window(centred, 0.0, 2, 5), qkr::ConfigError);
}

TEST_CASE("window mismatch is a usage error") {
  const auto u = qkr::build_floquet(0.5, ResonanceOrder(1, 1), BasisWindow::symmetric(40));
  const auto rho = DensityMatrix::pure_momentum(BasisWindow::symmetric(41), 0);
  CHECK_THROWS_AS(qkr::kraus_step(rho, u, u, 0.5), qkr::UsageError);
}

TEST_CASE("truncated window raises a truncation error") {
  // A state sitting at the window edge loses probability through the boundary.
  const auto window = BasisWindow::symmetric(70);
  const auto u = qkr::build_floquet(8.0, ResonanceOrder(1, 1), window);
  const auto rho = DensityMatrix::pure_momentum(window, 70);
  CHECK_THROWS_AS(qkr::kraus_step(rho, u, u, 0.5), qkr::TruncationError);
}

TEST_CASE("evolution invariants at a secondary resonance") {
  const KrausChannel ch(0.4, 1.1, 0.3, ResonanceOrder(1, 3));
  qkr::EvolveOptions opt;
  opt.positivity_checks = 10;
  opt.check_unitarity = true;
  const auto times = range(0, 150);
  const auto rec = qkr::evolve(ch, 150, times, opt);
  const auto& d = rec.diagnostics;
  CHECK(d.trace_drift_within_bound);
  CHECK(d.max_hermiticity_error <= 1e-12);
  CHECK(d.max_purity_increase <= 1e-10);
  CHECK(d.max_unitarity_residual <= 1e-10);
  REQUIRE(d.min_eigenvalues.size() == 10);
  for (double ev : d.min_eigenvalues) CHECK(ev >= -1e-10);
  CHECK(d.eigen_check_times.front() == 0);
  CHECK(d.eigen_check_times.back() == 150);
  CHECK(rec.sigma2.front() == 0.0);
  CHECK(rec.coherence.front() == 1.0);
  for (std::size_t i = 1; i < rec.coherence.size(); ++i) {
    CHECK(rec.coherence[i] <= rec.coherence[i - 1] + 1e-10);
  }
}

TEST_CASE("window grows to follow ballistic spreading") {
  const KrausChannel ch(0.3, 0.5, 0.5);
  const std::vector<long> times{300};
  qkr::EvolveOptions opt;
  opt.keep_distributions = true;
  const auto rec = qkr::evolve(ch, 300, times, opt);
  CHECK(rec.diagnostics.final_window_size > qkr::initial_window(ch, opt.policy).size());
  const auto& dist = rec.distributions.front();
  const auto em = qkr::edge_mass(dist, ch.half_bandwidth());
  CHECK(em.lower <= 1e-12);
  CHECK(em.upper <= 1e-12);
}

TEST_CASE("window cap raises a resource error with the reachable n") {
  const KrausChannel ch(0.3, 0.5, 0.5);
  qkr::EvolveOptions opt;
  opt.policy.max_size = 400;
  const std::vector<long> times{500};
  try {
    qkr::evolve(ch, 500, times, opt);
    FAIL("expected ResourceError");
  } catch (const qkr::ResourceError& e) {
    CHECK(e.reachable_n() > 0);
    CHECK(e.reachable_n() < 500);
  }
}

TEST_CASE("dense evolver steps and sample-time validation") {
  const KrausChannel ch(0.5, 1.3, 0.3);
  qkr::DenseEvolver ev(ch, DensityMatrix::pure_momentum(qkr::initial_window(ch, {}), 0));
  for (int k = 0; k < 5; ++k) ev.step();
  CHECK(ev.n() == 5);
  CHECK(ev.builds() >= 1);
  const std::vector<long> bad{-1, 3};
  CHECK_THROWS_AS(qkr::evolve(ch, 10, bad), qkr::ConfigError);
  const std::vector<long> late{11};
  CHECK_THROWS_AS(qkr::evolve(ch, 10, late), qkr::ConfigError);
  const std::vector<long> dup{5, 1, 5};
  CHECK(qkr::normalized_sample_times(dup, 10) == std::vector<long>{1, 5});
}
