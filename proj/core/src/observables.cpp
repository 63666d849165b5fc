#include "qkr/observables.hpp"

#include <cmath>

#include "qkr/errors.hpp"

namespace qkr {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

MomentumDistribution momentum_distribution(const DensityMatrix& rho) {
  MomentumDistribution dist{rho.window(), {}};
  const auto& m = rho.matrix();
  dist.p.resize(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) dist.p[static_cast<std::size_t>(i)] = m(i, i).real();
  return dist;
}

MomentumDistribution momentum_distribution(const BasisWindow& window, const StateVector& psi) {
  if (psi.size() != window.size()) throw UsageError("state vector does not match window");
  MomentumDistribution dist{window, {}};
  dist.p.resize(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) dist.p[static_cast<std::size_t>(i)] = std::norm(psi(i));
  return dist;
}

double moment(const MomentumDistribution& dist, int m) {
  if (m < 0) throw ConfigError("moment order must be >= 0");
  CompensatedSum acc;
  for (std::size_t k = 0; k < dist.p.size(); ++k) {
    const double l = static_cast<double>(dist.window.momentum(static_cast<long>(k)));
    double w = 1.0;
    for (int e = 0; e < m; ++e) w *= l;
    acc.add(w * dist.p[k]);
  }
  return acc.value();
}

double variance(const MomentumDistribution& dist) {
  const double mean = moment(dist, 1);
  return moment(dist, 2) - mean * mean;
}

double standard_deviation(const MomentumDistribution& dist) {
  return std::sqrt(std::max(0.0, variance(dist)));
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().squaredNorm();
}

}  // namespace qkr
