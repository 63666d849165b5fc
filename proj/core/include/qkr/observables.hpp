#pragma once

#include <vector>

#include "qkr/density.hpp"

namespace qkr {

/// P(l) over a basis window.
struct MomentumDistribution {
  BasisWindow window;
  std::vector<double> p;

  double at(long l) const { return window.contains(l) ? p[static_cast<std::size_t>(window.index(l))] : 0.0; }
};

/// Diagonal of rho.
MomentumDistribution momentum_distribution(const DensityMatrix& rho);

/// Distribution |psi_l|^2 of a (not necessarily normalized) state vector.
MomentumDistribution momentum_distribution(const BasisWindow& window, const StateVector& psi);

/// <l^m> = sum_l l^m P(l), compensated summation.  Throws ConfigError for m < 0.
double moment(const MomentumDistribution& dist, int m);

/// <l^2> - <l>^2.
double variance(const MomentumDistribution& dist);

double standard_deviation(const MomentumDistribution& dist);

/// Tr rho^2 = sum_ij |rho_ij|^2.
double purity(const DensityMatrix& rho);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qkr
