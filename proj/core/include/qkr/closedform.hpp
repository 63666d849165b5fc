#pragma once

#include <span>
#include <vector>

#include "qkr/channel.hpp"
#include "qkr/observables.hpp"

namespace qkr {

/// Binomial branch-count distribution after n kicks,
///   weight_j = C(n, j) alpha^{n-j} beta^j,  j = 0..n,
/// held in log domain.  Weights smaller than relative_cutoff times the
/// largest one are dropped, which leaves O(sqrt(n)) terms around the mean;
/// the retained weights are normalized to sum to one.  Log weights are
/// accumulated from exact term ratios away from the mode, so no factorial or
/// log-gamma cancellation enters even at n ~ 1e5.
class BinomialWeights {
 public:
  BinomialWeights(long n, double alpha, double relative_cutoff = 1e-30);

  long n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  long j_min() const noexcept { return j_min_; }
  long j_max() const noexcept { return j_min_ + static_cast<long>(weights_.size()) - 1; }

  /// Zero outside [j_min, j_max].
  double weight(long j) const noexcept;
  double log_weight(long j) const noexcept;

  /// weight_j for j = j_min..j_max.
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }

 private:
  long n_;
  double alpha_;
  long j_min_ = 0;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

/// Total kick strength after n kicks of which j used kappa2:
/// (n - j) kappa1 + j kappa2.
double accumulated_strength(long n, long j, double kappa1, double kappa2);

/// Overall factor of the variance law that the exact sum agrees with:
/// sigma^2 = 1/2 [(alpha k1 + beta k2)^2 n^2 + alpha beta (k1 - k2)^2 n].
inline constexpr double kVariancePrefactor = 0.5;

/// Prefactor printed in the original statement of the variance law.
inline constexpr double kPrintedVariancePrefactor = 0.25;

/// P(l, n) = sum_j weight_j J_l(r_nj)^2 from rho(0) = |0><0|.
/// Throws UnsupportedRegimeError unless the channel is at a primary resonance.
double probability(long l, long n, const KrausChannel& channel);

/// P(l, n) for every l of a window.
MomentumDistribution probability_distribution(long n, const KrausChannel& channel, const BasisWindow& window);

/// sigma^2(n) = <l^2> = sum_j weight_j r_nj^2 / 2, using the exact
/// sum rule sum_m m^2 J_m(x)^2 = x^2/2.  Primary resonance only.
double variance_sum(long n, const KrausChannel& channel);

/// prefactor * [(alpha k1 + beta k2)^2 n^2 + (k1 - k2)^2 alpha beta n].
double variance_formula(long n, const KrausChannel& channel, double prefactor = kVariancePrefactor);

/// Tr rho(n)^2 = sum_d A_n(d) J_0(d dk)^2 with A_n the autocorrelation of
/// the binomial weights and dk = k1 - k2.  O(K^2) with K retained weights.
/// Primary resonance only.
double coherence_exact(long n, const KrausChannel& channel);

/// Large-gap limit sum_j weight_j^2, independent of the kick strengths.
double coherence_largegap(long n, double alpha);

/// 1 / sqrt(pi n); throws DomainError for n < 1.
double coherence_asymptote(long n);

}  // namespace qkr
