#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qkr/closedform.hpp"
#include "qkr/errors.hpp"

using qkr::BinomialWeights;
using qkr::KrausChannel;

TEST_CASE("binomial weights match the multiplicative formula") {
  for (auto [n, alpha] : {std::pair{1L, 0.3}, std::pair{17L, 0.5}, std::pair{200L, 0.1}, std::pair{900L, 0.77}}) {
    const BinomialWeights w(n, alpha);
    const auto ref = oracle::binomial_pmf(n, alpha);
    for (long j = 0; j <= n; ++j) {
      const double r = ref[static_cast<std::size_t>(n - j)];  // weight_j uses alpha^{n-j}
      INFO("n = " << n << ", j = " << j);
      CHECK(std::abs(w.weight(j) - r) <= 1e-12 * r + 1e-29);
    }
    const auto ws = w.weights();
    CHECK(std::accumulate(ws.begin(), ws.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("binomial weights stay finite and normalized at large n") {
  for (long n : {10000L, 100000L, 1000000L}) {
    const BinomialWeights w(n, 0.3);
    const auto ws = w.weights();
    CHECK(std::accumulate(ws.begin(), ws.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double mean_j = static_cast<double>(n) * 0.7;
    CHECK(w.j_min() <= mean_j);
    CHECK(w.j_max() >= mean_j);
    CHECK(static_cast<double>(w.j_max() - w.j_min()) < 40.0 * std::sqrt(static_cast<double>(n)));
    for (double lw : w.log_weights()) CHECK(std::isfinite(lw));
  }
}

TEST_CASE("binomial weights: degenerate alpha") {
  const BinomialWeights one(10, 1.0);
  CHECK(one.weight(0) == 1.0);
  CHECK(one.weight(1) == 0.0);
  const BinomialWeights zero(10, 0.0);
  CHECK(zero.weight(10) == 1.0);
  CHECK(zero.j_min() == 10);
  CHECK_THROWS_AS(BinomialWeights(-1, 0.5), qkr::DomainError);
  CHECK_THROWS_AS(BinomialWeights(5, 1.5), qkr::ConfigError);
}

TEST_CASE("probability after one kick") {
  const KrausChannel ch(0.5, 1.3, 0.3);
  for (long l = -8; l <= 8; ++l) {
    const double a = oracle::bessel_std(static_cast<int>(l), 0.5);
    const double b = oracle::bessel_std(static_cast<int>(l), 1.3);
    CHECK(qkr::probability(l, 1, ch) == doctest::Approx(0.3 * a * a + 0.7 * b * b).epsilon(1e-12));
  }
  CHECK(qkr::probability(0, 0, ch) == 1.0);
  CHECK(qkr::probability(3, 0, ch) == 0.0);
}

TEST_CASE("probability matches the explicit binomial sum") {
  const KrausChannel ch(1.0, 2.0, 0.5);
  const long n = 12;
  const auto pmf = oracle::binomial_pmf(n, 0.5);
  for (long l = -30; l <= 30; l += 3) {
    double ref = 0.0;
    for (long j = 0; j <= n; ++j) {
      const double r = static_cast<double>(n - j) * 1.0 + static_cast<double>(j) * 2.0;
      const double v = oracle::bessel_std(static_cast<int>(l), r);
      ref += pmf[static_cast<std::size_t>(j)] * v * v;
    }
    CHECK(std::abs(qkr::probability(l, n, ch) - ref) <= 1e-13);
  }
}

TEST_CASE("distribution is normalized and has the closed-form variance") {
  const KrausChannel ch(0.5, 1.3, 0.3);
  const long n = 40;
  const auto dist = qkr::probability_distribution(n, ch, qkr::BasisWindow::symmetric(150));
  CHECK(std::accumulate(dist.p.begin(), dist.p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(qkr::variance(dist) == doctest::Approx(qkr::variance_sum(n, ch)).epsilon(1e-12));
}

TEST_CASE("variance sum and formula") {
  for (auto [k1, k2, a] : {std::tuple{0.5, 1.3, 0.3}, std::tuple{1.0, 2.0, 0.5}, std::tuple{1.0, -1.0, 0.5}}) {
    const KrausChannel ch(k1, k2, a);
    for (long n : {1L, 10L, 1000L, 100000L}) {
      CHECK(qkr::variance_formula(n, ch) == doctest::Approx(qkr::variance_sum(n, ch)).epsilon(1e-12));
    }
  }
  const KrausChannel ch(1.0, 2.0, 0.5);
  CHECK(qkr::variance_formula(5, ch, qkr::kPrintedVariancePrefactor) ==
        doctest::Approx(0.5 * qkr::variance_sum(5, ch)));
  CHECK(qkr::variance_sum(0, ch) == 0.0);
}

TEST_CASE("coherence: limits and bounds") {
  const KrausChannel same(0.7, 0.7, 0.4);
  CHECK(qkr::coherence_exact(50, same) == doctest::Approx(1.0).epsilon(1e-13));
  const KrausChannel ch(0.1, 0.3, 0.1);
  double prev = 1.0;
  for (long n = 1; n <= 200; ++n) {
    const double c = qkr::coherence_exact(n, ch);
    CHECK(c <= prev + 1e-14);
    CHECK(c >= qkr::coherence_largegap(n, 0.1) - 1e-14);
    prev = c;
  }
  CHECK(qkr::coherence_exact(0, ch) == 1.0);
}

TEST_CASE("coherence: large gap approaches the sum of squared weights") {
  const KrausChannel ch(1000.1, 0.1, 0.5);
  for (long n : {10L, 100L, 1000L}) {
    CHECK(qkr::coherence_exact(n, ch) == doctest::Approx(qkr::coherence_largegap(n, 0.5)).epsilon(0.01));
  }
}

TEST_CASE("coherence: large-gap value matches the explicit sum") {
  const long n = 30;
  const auto pmf = oracle::binomial_pmf(n, 0.2);
  double ref = 0.0;
  for (double w : pmf) ref += w * w;
  CHECK(qkr::coherence_largegap(n, 0.2) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(qkr::coherence_largegap(n, 1.0) == 1.0);
}

TEST_CASE("coherence asymptote") {
  CHECK(qkr::coherence_asymptote(1) == doctest::Approx(1.0 / std::sqrt(std::acos(-1.0))));
  CHECK_THROWS_AS(qkr::coherence_asymptote(0), qkr::DomainError);
}

TEST_CASE("closed forms refuse secondary resonances") {
  const KrausChannel ch(0.1, 0.2, 0.5, qkr::ResonanceOrder(1, 3));
  CHECK_THROWS_AS(qkr::probability(0, 3, ch), qkr::UnsupportedRegimeError);
  CHECK_THROWS_AS(qkr::variance_sum(3, ch), qkr::UnsupportedRegimeError);
  CHECK_THROWS_AS(qkr::coherence_exact(3, ch), qkr::UnsupportedRegimeError);
  CHECK_THROWS_AS(qkr::probability_distribution(3, ch, qkr::BasisWindow::symmetric(40)),
                  qkr::UnsupportedRegimeError);
}

TEST_CASE("coherence depends on the kick strengths only through their gap") {
  for (double shift : {0.0, 0.37, 5.0, 999.9}) {
    const KrausChannel a(0.4, 1.4, 0.3);
    const KrausChannel b(0.4 + shift, 1.4 + shift, 0.3);
    for (long n : {1L, 7L, 64L, 500L}) {
      CHECK(qkr::coherence_exact(n, b) == doctest::Approx(qkr::coherence_exact(n, a)).epsilon(1e-13));
    }
  }
}
