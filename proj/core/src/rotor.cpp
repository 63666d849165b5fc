#include "qkr/rotor.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/specfun.hpp"

namespace qkr {

namespace {

constexpr long kMaxDenominator = 1L << 30;

// i^{-m}: the 4-cycle 1, -i, -1, i.
cplx inverse_i_power(long m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

ResonanceOrder::ResonanceOrder(long p, long q) : p_(p), q_(q) {
  if (p < 1 || q < 1) {
    throw ConfigError("resonance p/q needs p >= 1 and q >= 1, got " + std::to_string(p) + "/" +
                      std::to_string(q));
  }
  if (q > kMaxDenominator) throw ConfigError("resonance denominator q too large");
  if (std::gcd(p, q) != 1) {
    throw ConfigError("resonance p/q must be in lowest terms, got " + std::to_string(p) + "/" +
                      std::to_string(q));
  }
}

long ResonanceOrder::phase_residue(long j) const noexcept {
  const long jm = ((j % q_) + q_) % q_;
  return ((jm * jm) % q_) * (p_ % q_) % q_;
}

cplx ResonanceOrder::free_phase(long j) const {
  const long r = phase_residue(j);
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q_));
}

BasisWindow::BasisWindow(long l_min, long l_max) : l_min_(l_min), l_max_(l_max) {
  if (l_min > 0 || l_max < 0) {
    throw ConfigError("basis window [" + std::to_string(l_min) + ", " + std::to_string(l_max) +
                      "] must contain l = 0");
  }
}

FloquetOperator::FloquetOperator(double kappa, ResonanceOrder resonance, BasisWindow window)
    : kappa_(kappa), resonance_(resonance), window_(window) {}

cplx FloquetOperator::kick_coefficient(long m) const noexcept {
  if (m < -effective_bandwidth_ || m > effective_bandwidth_) return {0.0, 0.0};
  return kick_[static_cast<std::size_t>(m + effective_bandwidth_)];
}

cplx FloquetOperator::element(long l, long j) const {
  if (!window_.contains(l) || !window_.contains(j)) return {0.0, 0.0};
  return kick_coefficient(j - l) * phase(j);
}

StateVector FloquetOperator::apply(const StateVector& psi) const {
  if (psi.size() != window_.size()) {
    throw UsageError("state of size " + std::to_string(psi.size()) + " applied to operator on window of size " +
                     std::to_string(window_.size()));
  }
  Eigen::MatrixXcd in = psi;
  Eigen::MatrixXcd out(psi.size(), 1);
  apply_columns(in, out);
  return out.col(0);
}

void FloquetOperator::apply_raw(const cplx* src, cplx* dst, cplx* phased) const {
  const long n = window_.size();
  const long w = effective_bandwidth_;
  // Interleaved re/im views; complex arithmetic spelled out so the loops vectorise.
  const auto* ph = reinterpret_cast<const double*>(phases_.data());
  const auto* s = reinterpret_cast<const double*>(src);
  auto* p = reinterpret_cast<double*>(phased);
  auto* d = reinterpret_cast<double*>(dst);
  for (long k = 0; k < n; ++k) {
    p[2 * k] = ph[2 * k] * s[2 * k] - ph[2 * k + 1] * s[2 * k + 1];
    p[2 * k + 1] = ph[2 * k] * s[2 * k + 1] + ph[2 * k + 1] * s[2 * k];
  }
  for (long k = 0; k < 2 * n; ++k) d[k] = 0.0;
  for (long m = -w; m <= w; ++m) {
    const double kr = kick_[static_cast<std::size_t>(m + w)].real();
    const double ki = kick_[static_cast<std::size_t>(m + w)].imag();
    const long i_lo = std::max(0L, -m);
    const long i_hi = std::min(n - 1, n - 1 - m);
    const double* pm = p + 2 * m;
    for (long i = i_lo; i <= i_hi; ++i) {
      d[2 * i] += kr * pm[2 * i] - ki * pm[2 * i + 1];
      d[2 * i + 1] += kr * pm[2 * i + 1] + ki * pm[2 * i];
    }
  }
}

void FloquetOperator::apply_columns(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) const {
  const long n = window_.size();
  if (in.rows() != n) {
    throw UsageError("operand rows " + std::to_string(in.rows()) + " do not match window size " +
                     std::to_string(n));
  }
  out.resize(n, in.cols());
  std::vector<cplx> phased(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < in.cols(); ++c) apply_raw(in.col(c).data(), out.col(c).data(), phased.data());
}

void FloquetOperator::apply_into(std::span<const cplx> in, std::span<cplx> out) const {
  const auto n = static_cast<std::size_t>(window_.size());
  if (in.size() != n || out.size() != n) throw UsageError("buffer size does not match window size");
  std::vector<cplx> phased(n);
  apply_raw(in.data(), out.data(), phased.data());
}

Eigen::MatrixXcd FloquetOperator::dense() const {
  const long n = window_.size();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (long j = 0; j < n; ++j) {
    for (long i = std::max(0L, j - effective_bandwidth_); i <= std::min(n - 1, j + effective_bandwidth_); ++i) {
      u(i, j) = element(window_.momentum(i), window_.momentum(j));
    }
  }
  return u;
}

double FloquetOperator::interior_unitarity_residual() const {
  const long w = half_bandwidth_;
  const long we = effective_bandwidth_;
  double worst = 0.0;
  for (long j = window_.l_min() + w; j <= window_.l_max() - w; ++j) {
    for (long i = std::max(window_.l_min(), j - 2 * we); i <= std::min(window_.l_max(), j + 2 * we); ++i) {
      cplx acc{0.0, 0.0};
      const long l_lo = std::max({window_.l_min(), i - we, j - we});
      const long l_hi = std::min({window_.l_max(), i + we, j + we});
      for (long l = l_lo; l <= l_hi; ++l) acc += std::conj(element(l, i)) * element(l, j);
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

FloquetOperator build_floquet(double kappa, const ResonanceOrder& resonance, const BasisWindow& window) {
  if (!std::isfinite(kappa)) throw DomainError("kick strength must be finite");
  FloquetOperator u(kappa, resonance, window);
  u.half_bandwidth_ = bessel_order_cutoff(kappa);
  const long w = u.half_bandwidth_;
  if (window.size() < 2 * w + 1) {
    throw ConfigError("basis window of " + std::to_string(window.size()) + " sites cannot hold kick band of half-width " +
                      std::to_string(w) + " (kappa = " + std::to_string(kappa) + ")");
  }

  const BesselRow row = bessel_j_row(kappa, static_cast<int>(w));
  int we = 0;
  for (int m = 0; m <= w; ++m) {
    if (row[m] != 0.0) we = m;
  }
  u.effective_bandwidth_ = we;
  u.kick_.resize(static_cast<std::size_t>(2 * we + 1));
  for (int m = -we; m <= we; ++m) u.kick_[static_cast<std::size_t>(m + we)] = inverse_i_power(m) * row[m];

  u.phases_.resize(static_cast<std::size_t>(window.size()));
  for (long l = window.l_min(); l <= window.l_max(); ++l) {
    u.phases_[static_cast<std::size_t>(window.index(l))] = resonance.free_phase(l);
  }
  return u;
}

double commutator_norm(const FloquetOperator& u1, const FloquetOperator& u2) {
  if (!(u1.window() == u2.window())) throw UsageError("commutator of operators on different windows");
  if (!(u1.resonance() == u2.resonance())) throw UsageError("commutator of operators at different resonances");
  const BasisWindow& win = u1.window();
  const long margin = u1.half_bandwidth() + u2.half_bandwidth();
  const long first = win.index(win.l_min() + margin);
  const long last = win.index(win.l_max() - margin);
  if (first > last) throw UsageError("window has no interior columns for the commutator");

  const long cols = last - first + 1;
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(win.size(), cols);
  for (long c = 0; c < cols; ++c) basis(first + c, c) = 1.0;

  Eigen::MatrixXcd a, b, ab, ba;
  u2.apply_columns(basis, a);
  u1.apply_columns(a, ab);
  u1.apply_columns(basis, b);
  u2.apply_columns(b, ba);
  return (ab - ba).colwise().norm().maxCoeff();
}

}  // namespace qkr
