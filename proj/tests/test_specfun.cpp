#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qkr/errors.hpp"
#include "qkr/specfun.hpp"

using qkr::bessel_j;
using qkr::bessel_j_row;

TEST_CASE("bessel: reference values") {
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(bessel_j(1, 0.1) == doctest::Approx(0.04993752603624200).epsilon(1e-15));
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(bessel_j(-3, 0.0) == 0.0);
}

TEST_CASE("bessel: power series agreement for |x| <= 2") {
  for (double x = -2.0; x <= 2.0; x += 0.0625) {
    const auto row = bessel_j_row(x, 40);
    for (int m = -40; m <= 40; ++m) {
      INFO("m = " << m << ", x = " << x);
      CHECK(std::abs(row[m] - oracle::bessel_series(m, x)) <= 1e-12);
    }
  }
}

TEST_CASE("bessel: agreement with std::cyl_bessel_j") {
  for (double x : {0.3, 1.0, 2.5, 7.0, 10.0, 24.9, 25.0, 33.3, 100.0, 1000.0}) {
    const int m_max = std::min(qkr::bessel_order_cutoff(x), 120);
    const auto row = bessel_j_row(x, m_max);
    for (int m = 0; m <= m_max; ++m) {
      const double ref = oracle::bessel_std(m, x);
      INFO("m = " << m << ", x = " << x);
      CHECK(std::abs(row[m] - ref) <= 1e-12 * std::max(1.0, std::abs(ref)) + 1e-14);
    }
  }
}

TEST_CASE("bessel: sum rules") {
  for (double x : {0.1, 1.0, 10.0, 100.0, 1000.0, 5432.1}) {
    const auto row = bessel_j_row(x, qkr::bessel_order_cutoff(x));
    long double s0 = 0.0L;
    long double s2 = 0.0L;
    for (int m = -row.m_max(); m <= row.m_max(); ++m) {
      const long double v = row[m];
      s0 += v * v;
      s2 += static_cast<long double>(m) * m * v * v;
    }
    INFO("x = " << x);
    CHECK(std::abs(static_cast<double>(s0) - 1.0) <= 1e-12);
    CHECK(std::abs(static_cast<double>(s2) / (x * x / 2.0) - 1.0) <= 1e-10);
  }
}

TEST_CASE("bessel: three-term recurrence holds") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(0.05, 300.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = dist(gen);
    const auto row = bessel_j_row(x, qkr::bessel_order_cutoff(x));
    for (int m = 1; m < row.m_max(); ++m) {
      const double lhs = row[m - 1] + row[m + 1];
      const double rhs = 2.0 * m / x * row[m];
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("bessel: parity in order and argument") {
  for (double x : {0.7, 3.0, 40.0}) {
    const auto pos = bessel_j_row(x, 30);
    const auto neg = bessel_j_row(-x, 30);
    for (int m = 0; m <= 30; ++m) {
      const double s = (m & 1) ? -1.0 : 1.0;
      CHECK(pos[-m] == doctest::Approx(s * pos[m]));
      CHECK(neg[m] == doctest::Approx(s * pos[m]));
      CHECK(bessel_j(-m, x) == doctest::Approx(s * bessel_j(m, x)));
    }
  }
}

TEST_CASE("bessel: single value matches row entry") {
  for (double x : {0.2, 5.0, 60.0, 2500.0}) {
    const auto row = bessel_j_row(x, 50);
    for (int m : {0, 1, 7, 50}) CHECK(bessel_j(m, x) == doctest::Approx(row[m]).epsilon(1e-13));
  }
}

TEST_CASE("bessel: tiny values are flushed to zero") {
  const auto row = bessel_j_row(0.1, qkr::bessel_order_cutoff(0.1));
  for (int m = 0; m <= row.m_max(); ++m) {
    CHECK((row[m] == 0.0 || std::abs(row[m]) >= qkr::kBesselFlushThreshold));
  }
  CHECK(row[row.m_max()] == 0.0);
}

TEST_CASE("bessel: domain errors") {
  CHECK_THROWS_AS(bessel_j_row(std::nan(""), 5), qkr::DomainError);
  CHECK_THROWS_AS(bessel_j(2, INFINITY), qkr::DomainError);
  CHECK_THROWS_AS(bessel_j_row(1.0, -1), qkr::ConfigError);
  const auto row = bessel_j_row(1.0, 5);
  CHECK_THROWS_AS(row[6], qkr::UsageError);
}
