#include <doctest.h>

#include <cmath>
#include <random>

#include "qkr/errors.hpp"
#include "qkr/fitting.hpp"

using qkr::TimeSeries;

namespace {

TimeSeries make_series(long n_max, double (*f)(double)) {
  TimeSeries s;
  for (long n = 1; n <= n_max; ++n) {
    s.n.push_back(n);
    s.y.push_back(f(static_cast<double>(n)));
  }
  return s;
}

}  // namespace

TEST_CASE("power law recovered exactly") {
  const auto s = make_series(500, [](double n) { return 3.5 * std::pow(n, 0.73); });
  const auto r = qkr::fit_power_law(s, qkr::full_window(s));
  CHECK(r.model == qkr::FitModel::power);
  CHECK(r.exponent == doctest::Approx(0.73).epsilon(1e-12));
  CHECK(r.log_prefactor == doctest::Approx(std::log(3.5)).epsilon(1e-12));
  CHECK(r.rms_residual <= 1e-12);
  CHECK(r.points == 500);
}

TEST_CASE("exponential decay recovered exactly") {
  const auto s = make_series(400, [](double n) { return 0.8 * std::exp(-0.004 * n); });
  const auto r = qkr::fit_exponential(s, qkr::full_window(s));
  CHECK(r.exponent == doctest::Approx(0.004).epsilon(1e-10));
  CHECK(r.rms_residual <= 1e-12);
  const auto c = qkr::compare_models(s, qkr::full_window(s));
  CHECK(c.best == qkr::FitModel::exponential);
  CHECK(c.exponential.rms_residual < c.power.rms_residual);
}

TEST_CASE("power law preferred for power-law data") {
  const auto s = make_series(400, [](double n) { return std::pow(n, -0.5); });
  CHECK(qkr::compare_models(s, qkr::full_window(s)).best == qkr::FitModel::power);
}

TEST_CASE("exponent invariant under rescaling of y (property)") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  std::uniform_real_distribution<double> scale(-20.0, 20.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = expo(gen);
    TimeSeries s;
    for (long n = 1; n <= 200; n += 3) {
      s.n.push_back(n);
      s.y.push_back(std::pow(static_cast<double>(n), c) * std::exp(noise(gen)));
    }
    TimeSeries t = s;
    const double k = std::exp(scale(gen));
    for (double& v : t.y) v *= k;
    const auto a = qkr::fit_power_law(s, qkr::full_window(s));
    const auto b = qkr::fit_power_law(t, qkr::full_window(t));
    CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-9));
    CHECK(a.rms_residual == doctest::Approx(b.rms_residual).epsilon(1e-6));
    CHECK(std::abs(a.exponent - c) < 0.05);
  }
}

TEST_CASE("fit windows") {
  const auto s = make_series(5000, [](double n) { return n; });
  CHECK(qkr::full_window(s).n_lo == 1);
  CHECK(qkr::trailing_window(s, 10).n_lo == 4991);
  CHECK(qkr::trailing_window(s, 10000).n_lo == 1);
  CHECK(qkr::last_decade_window(s).n_lo == 500);
  CHECK(qkr::last_decade_window(s).n_hi == 5000);
  CHECK(qkr::default_window(s).n_lo == 4001);
  const auto short_series = make_series(300, [](double n) { return n; });
  CHECK(qkr::default_window(short_series).n_lo == 151);
  const auto r = qkr::fit_power_law(s, {100, 199});
  CHECK(r.points == 100);
}

TEST_CASE("fit errors") {
  const auto s = make_series(20, [](double n) { return n; });
  CHECK_THROWS_AS(qkr::fit_power_law(s, {1, 5}), qkr::FitError);
  TimeSeries neg = s;
  neg.y[10] = -1.0;
  CHECK_THROWS_AS(qkr::fit_power_law(neg, qkr::full_window(neg)), qkr::FitError);
  TimeSeries bad = s;
  bad.n[3] = bad.n[2];
  CHECK_THROWS_AS(bad.validate(), qkr::FitError);
  TimeSeries ragged = s;
  ragged.y.pop_back();
  CHECK_THROWS_AS(qkr::fit_power_law(ragged, {1, 20}), qkr::FitError);
  CHECK_THROWS_AS(qkr::full_window(TimeSeries{}), qkr::FitError);
  TimeSeries zero_n;
  for (long n = 0; n < 10; ++n) {
    zero_n.n.push_back(n);
    zero_n.y.push_back(1.0);
  }
  CHECK_THROWS_AS(qkr::fit_power_law(zero_n, qkr::full_window(zero_n)), qkr::FitError);
  CHECK(qkr::to_string(qkr::FitModel::exponential) == "exponential");
}
