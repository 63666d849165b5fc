#include "qkr/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qkr/errors.hpp"

namespace qkr {

namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("Bessel argument must be finite, got " + std::to_string(x));
  }
}

// Hankel's large-argument expansion.  Valid when x >= max(25, m^2); the
// series is summed until its terms stop shrinking or drop below round-off.
double bessel_j_asymptotic(int m, double x) {
  const double mu = 4.0 * static_cast<double>(m) * static_cast<double>(m);
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // k odd feeds Q, k even feeds P, with alternating signs in pairs.
    const int r = k % 4;
    if (r == 1) q += term;
    else if (r == 2) p -= term;
    else if (r == 3) q -= term;
    else p += term;
    if (mag < 1e-17) break;
  }
  // chi = x - (m/2 + 1/4) pi, with the m-dependent shift reduced exactly.
  const int quarter_turns = ((m % 4) + 4) % 4;
  const double shift = quarter_turns * 0.5 * std::numbers::pi + 0.25 * std::numbers::pi;
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double cs = std::cos(shift);
  const double ss = std::sin(shift);
  const double cos_chi = cx * cs + sx * ss;
  const double sin_chi = sx * cs - cx * ss;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

int bessel_order_cutoff(double x) {
  const double ax = std::abs(x);
  return static_cast<int>(std::ceil(ax + 15.0 * std::cbrt(ax))) + 25;
}

BesselRow::BesselRow(double x, std::vector<double> values) : x_(x), values_(std::move(values)) {}

double BesselRow::operator[](int m) const {
  const int am = m < 0 ? -m : m;
  if (am > m_max()) {
    throw UsageError("Bessel order " + std::to_string(m) + " outside row of m_max " +
                     std::to_string(m_max()));
  }
  const double v = values_[static_cast<std::size_t>(am)];
  return (m < 0 && (am & 1)) ? -v : v;
}

BesselRow bessel_j_row(double x, int m_max) {
  require_finite(x);
  if (m_max < 0) throw ConfigError("Bessel row needs m_max >= 0");

  std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return BesselRow(x, std::move(out));
  }

  const double ax = std::abs(x);
  const int start = std::max(m_max, bessel_order_cutoff(ax)) + 1;
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[static_cast<std::size_t>(start)] = 1.0;

  const double two_over_x = 2.0 / ax;
  for (int m = start; m >= 1; --m) {
    const auto um = static_cast<std::size_t>(m);
    f[um - 1] = m * two_over_x * f[um] - f[um + 1];
    if (std::abs(f[um - 1]) > kRescaleAbove) {
      for (std::size_t k = um - 1; k <= static_cast<std::size_t>(start); ++k) f[k] *= kRescaleFactor;
    }
  }

  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  for (double& v : f) v /= fmax;

  // Quadratic identity J_0^2 + 2 sum_{m>=1} J_m^2 = 1 fixes the scale;
  // the linear identity J_0 + 2 sum J_{2k} = 1 fixes the sign.
  double quad = 0.0;
  double lin = 0.0;
  for (int m = start; m >= 1; --m) {
    const double v = f[static_cast<std::size_t>(m)];
    quad += 2.0 * v * v;
    if ((m & 1) == 0) lin += 2.0 * v;
  }
  quad += f[0] * f[0];
  lin += f[0];
  const double scale = (lin < 0.0 ? -1.0 : 1.0) / std::sqrt(quad);

  for (int m = 0; m <= m_max; ++m) {
    double v = f[static_cast<std::size_t>(m)] * scale;
    if (std::abs(v) < kBesselFlushThreshold) v = 0.0;
    if (x < 0.0 && (m & 1)) v = -v;
    out[static_cast<std::size_t>(m)] = v;
  }
  return BesselRow(x, std::move(out));
}

double bessel_j(int m, double x) {
  require_finite(x);
  double sign = 1.0;
  if (m < 0) {
    m = -m;
    if (m & 1) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (m & 1) sign = -sign;
  }
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;

  const double mm = static_cast<double>(m) * static_cast<double>(m);
  if (x >= 25.0 && x >= mm) {
    const double v = bessel_j_asymptotic(m, x);
    return std::abs(v) < kBesselFlushThreshold ? 0.0 : sign * v;
  }
  return sign * bessel_j_row(x, m)[m];
}

}  // namespace qkr
