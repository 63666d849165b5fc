#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qkr {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;

/// Resonant kick period tau = 2 pi p / q, kept as the exact rational p/q.
class ResonanceOrder {
 public:
  /// Throws ConfigError unless p >= 1, q >= 1 and gcd(p, q) = 1.
  ResonanceOrder(long p, long q);

  static ResonanceOrder primary() { return ResonanceOrder(1, 1); }

  long p() const noexcept { return p_; }
  long q() const noexcept { return q_; }

  /// p/q integer: the kick operators at different strengths commute.
  bool is_primary() const noexcept { return q_ == 1; }

  /// (j^2 p) mod q, in [0, q).
  long phase_residue(long j) const noexcept;

  /// exp(-i 2 pi (j^2 p mod q) / q).
  cplx free_phase(long j) const;

  friend bool operator==(const ResonanceOrder&, const ResonanceOrder&) = default;

 private:
  long p_;
  long q_;
};

/// Contiguous range of angular-momentum quantum numbers [l_min, l_max]
/// that always contains l = 0.
class BasisWindow {
 public:
  /// Throws ConfigError unless l_min <= 0 <= l_max.
  BasisWindow(long l_min, long l_max);

  static BasisWindow symmetric(long half_width) { return BasisWindow(-half_width, half_width); }

  long l_min() const noexcept { return l_min_; }
  long l_max() const noexcept { return l_max_; }
  long size() const noexcept { return l_max_ - l_min_ + 1; }
  bool contains(long l) const noexcept { return l >= l_min_ && l <= l_max_; }
  long index(long l) const noexcept { return l - l_min_; }
  long momentum(long index) const noexcept { return l_min_ + index; }

  friend bool operator==(const BasisWindow&, const BasisWindow&) = default;

 private:
  long l_min_;
  long l_max_;
};

/// One-kick evolution operator of the resonant kicked rotor on a truncated
/// momentum basis,
///
///   U_{lj} = i^{-(j-l)} exp(-i 2 pi (j^2 p mod q)/q) J_{j-l}(kappa).
///
/// Stored as a Toeplitz band of kick coefficients i^{-m} J_m(kappa),
/// |m| <= half_bandwidth(), times a diagonal of free-rotation phases.
/// Entries with |J_m| < 1e-30 are exact zeros, so effective_bandwidth()
/// can be much smaller than the nominal half-bandwidth.
///
/// Only the interior, at least half_bandwidth() sites from either edge, is
/// unitary; the truncation breaks unitarity near the edges.
class FloquetOperator {
 public:
  double kappa() const noexcept { return kappa_; }
  const ResonanceOrder& resonance() const noexcept { return resonance_; }
  const BasisWindow& window() const noexcept { return window_; }

  /// Nominal half-bandwidth w = ceil(|kappa| + 15 |kappa|^{1/3}) + 25.
  int half_bandwidth() const noexcept { return half_bandwidth_; }

  /// Largest |m| with a non-zero kick coefficient.
  int effective_bandwidth() const noexcept { return effective_bandwidth_; }

  /// i^{-m} J_m(kappa); zero outside the band.
  cplx kick_coefficient(long m) const noexcept;

  /// Free-rotation phase of column l.
  cplx phase(long l) const { return phases_[static_cast<std::size_t>(window_.index(l))]; }

  /// Matrix element <l|U|j>; zero outside the band or window.
  cplx element(long l, long j) const;

  /// U psi in O(size * effective_bandwidth).
  StateVector apply(const StateVector& psi) const;

  /// out = U * in, column by column; in and out may not alias.
  void apply_columns(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) const;

  /// out = U * in for raw window-sized buffers; in and out may not alias.
  void apply_into(std::span<const cplx> in, std::span<cplx> out) const;

  /// Dense copy, for diagnostics and small tests.
  Eigen::MatrixXcd dense() const;

  /// max |(U^dagger U - I)_{ij}| over interior columns j (and all rows i).
  double interior_unitarity_residual() const;

  friend FloquetOperator build_floquet(double kappa, const ResonanceOrder& resonance,
                                       const BasisWindow& window);

 private:
  FloquetOperator(double kappa, ResonanceOrder resonance, BasisWindow window);

  void apply_raw(const cplx* src, cplx* dst, cplx* phased) const;

  double kappa_;
  ResonanceOrder resonance_;
  BasisWindow window_;
  int half_bandwidth_ = 0;
  int effective_bandwidth_ = 0;
  std::vector<cplx> kick_;    // index m + effective_bandwidth_
  std::vector<cplx> phases_;  // index window_.index(l)
};

/// Builds U(kappa) on the given window.  Throws ConfigError when the window
/// holds fewer than 2w + 1 sites, DomainError for non-finite kappa.
FloquetOperator build_floquet(double kappa, const ResonanceOrder& resonance,
                              const BasisWindow& window);

/// Largest column 2-norm of U1 U2 - U2 U1 over columns at least
/// (w1 + w2) sites from either edge.  Throws UsageError on window or
/// resonance mismatch.
double commutator_norm(const FloquetOperator& u1, const FloquetOperator& u2);

}  // namespace qkr
