#pragma once

#include <Eigen/Dense>

#include "qkr/rotor.hpp"

namespace qkr {

/// Rotor state rho on a basis window.  Hermitian with unit trace; positivity
/// is checked on demand through min_eigenvalue().
class DensityMatrix {
 public:
  /// Throws UsageError unless rho is window.size() x window.size().
  DensityMatrix(BasisWindow window, Eigen::MatrixXcd rho);

  /// |l><l|.
  static DensityMatrix pure_momentum(const BasisWindow& window, long l = 0);

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix from_state(const BasisWindow& window, const StateVector& psi);

  const BasisWindow& window() const noexcept { return window_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }

  /// rho_{lm} by momentum labels.
  cplx operator()(long l, long m) const { return rho_(window_.index(l), window_.index(m)); }

  double trace() const { return rho_.diagonal().real().sum(); }

  /// max |rho_ij - conj(rho_ji)|.
  double hermiticity_error() const;

  /// Smallest eigenvalue of the Hermitian part; O(L^3).
  double min_eigenvalue() const;

  /// The same state on a window that contains this one, zero padded.
  DensityMatrix embedded(const BasisWindow& larger) const;

 private:
  BasisWindow window_;
  Eigen::MatrixXcd rho_;
};

}  // namespace qkr
