#pragma once

#include <span>
#include <vector>

namespace qkr {

/// Magnitudes below this are flushed to exactly zero.
inline constexpr double kBesselFlushThreshold = 1e-30;

/// Order beyond which |J_m(x)| is negligible (< 1e-30) for the given |x|:
/// ceil(|x| + 15 |x|^{1/3}) + 25.
int bessel_order_cutoff(double x);

/// J_m(x) for m = 0..m_max at a fixed argument x.
///
/// Negative orders are served through J_{-m}(x) = (-1)^m J_m(x).
class BesselRow {
 public:
  BesselRow(double x, std::vector<double> values);

  double x() const noexcept { return x_; }
  int m_max() const noexcept { return static_cast<int>(values_.size()) - 1; }

  /// J_m(x) for |m| <= m_max.
  double operator[](int m) const;

  /// J_0 .. J_{m_max}.
  std::span<const double> values() const noexcept { return values_; }

 private:
  double x_;
  std::vector<double> values_;
};

/// Row of integer-order Bessel functions by normalized backward recurrence.
/// Absolute error is below 1e-12 for every returned order.
/// Throws DomainError for non-finite x and ConfigError for m_max < 0.
BesselRow bessel_j_row(double x, int m_max);

/// Single value J_m(x), any integer m.  Uses the Hankel asymptotic expansion
/// when |x| is large compared to m^2, the backward recurrence otherwise.
double bessel_j(int m, double x);

}  // namespace qkr
