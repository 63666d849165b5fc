#include "qkr/density.hpp"

#include <string>

#include <Eigen/Eigenvalues>

#include "qkr/errors.hpp"

namespace qkr {

DensityMatrix::DensityMatrix(BasisWindow window, Eigen::MatrixXcd rho)
    : window_(window), rho_(std::move(rho)) {
  if (rho_.rows() != window_.size() || rho_.cols() != window_.size()) {
    throw UsageError("density matrix of shape " + std::to_string(rho_.rows()) + "x" +
                     std::to_string(rho_.cols()) + " does not match window of " +
                     std::to_string(window_.size()) + " sites");
  }
}

DensityMatrix DensityMatrix::pure_momentum(const BasisWindow& window, long l) {
  if (!window.contains(l)) throw ConfigError("initial momentum " + std::to_string(l) + " outside window");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(window.size(), window.size());
  rho(window.index(l), window.index(l)) = 1.0;
  return DensityMatrix(window, std::move(rho));
}

DensityMatrix DensityMatrix::from_state(const BasisWindow& window, const StateVector& psi) {
  if (psi.size() != window.size()) throw UsageError("state vector does not match window");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw ConfigError("cannot build a density matrix from a zero state");
  return DensityMatrix(window, psi * psi.adjoint() / norm2);
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::embedded(const BasisWindow& larger) const {
  if (larger.l_min() > window_.l_min() || larger.l_max() < window_.l_max()) {
    throw UsageError("embedding target window does not contain the current window");
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(larger.size(), larger.size());
  const long off = larger.index(window_.l_min());
  rho.block(off, off, window_.size(), window_.size()) = rho_;
  return DensityMatrix(larger, std::move(rho));
}

}  // namespace qkr
