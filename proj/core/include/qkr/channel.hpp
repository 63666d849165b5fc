#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qkr/density.hpp"
#include "qkr/observables.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

/// Two-branch random-unitary channel
///
///   rho -> alpha U(kappa1) rho U(kappa1)^dagger + beta U(kappa2) rho U(kappa2)^dagger,
///
/// with Kraus operators sqrt(alpha) U1, sqrt(beta) U2 and beta = 1 - alpha.
class KrausChannel {
 public:
  /// Throws ConfigError for non-finite strengths or alpha outside [0, 1].
  KrausChannel(double kappa1, double kappa2, double alpha,
               ResonanceOrder resonance = ResonanceOrder::primary());

  double kappa1() const noexcept { return kappa1_; }
  double kappa2() const noexcept { return kappa2_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return 1.0 - alpha_; }
  double delta_kappa() const noexcept { return kappa1_ - kappa2_; }
  const ResonanceOrder& resonance() const noexcept { return resonance_; }

  /// Larger of the two nominal kick half-bandwidths.
  int half_bandwidth() const;

 private:
  double kappa1_;
  double kappa2_;
  double alpha_;
  ResonanceOrder resonance_;
};

/// How the basis window follows the spreading state.  Negative pad/growth
/// select the defaults pad = w and growth = max(32, 2w), w being the
/// channel's half-bandwidth.
struct TruncationPolicy {
  double tail_tol = 1e-12;
  long pad = -1;
  long growth = -1;
  long max_size = 20001;

  long pad_for(int half_bandwidth) const { return pad >= 0 ? pad : half_bandwidth; }
  long growth_for(int half_bandwidth) const;
};

/// Returns rho' = alpha U1 rho U1^dagger + (1 - alpha) U2 rho U2^dagger,
/// symmetrized to (rho' + rho'^dagger)/2.  The trace is not renormalized;
/// |Tr rho' - 1| > 1e-8 raises TruncationError.
DensityMatrix kraus_step(const DensityMatrix& rho, const FloquetOperator& u1,
                         const FloquetOperator& u2, double alpha);

/// Probability held within `pad` sites of the lower and upper edges.
struct EdgeMass {
  double lower = 0.0;
  double upper = 0.0;
};
EdgeMass edge_mass(const MomentumDistribution& dist, long pad);

/// If the mass within `pad` sites of an edge exceeds tail_tol, returns rho
/// zero-padded by `growth` sites on that side; otherwise rho unchanged.
DensityMatrix grow_window(const DensityMatrix& rho, double tail_tol, long pad, long growth);

/// Symmetric window large enough for the channel's band plus policy margins.
BasisWindow initial_window(const KrausChannel& channel, const TruncationPolicy& policy);

/// Invariant bookkeeping collected along an evolution.
struct EvolutionDiagnostics {
  double max_trace_drift = 0.0;          // max_n |Tr rho(n) - 1|
  bool trace_drift_within_bound = true;  // |Tr rho(n) - 1| <= n * 1e-12 for every n
  double max_hermiticity_error = 0.0;
  double max_purity_increase = 0.0;  // max_n C(n+1) - C(n), clipped at 0
  double max_unitarity_residual = 0.0;
  std::vector<long> eigen_check_times;
  std::vector<double> min_eigenvalues;
  long final_window_size = 0;
};

/// Observables sampled along one evolution.  Monte Carlo runs also fill the
/// standard-error arrays.
struct EvolutionRecord {
  std::vector<long> sample_times;
  std::vector<double> sigma2;
  std::vector<double> coherence;
  std::vector<double> sigma2_stderr;
  std::vector<double> coherence_stderr;
  std::vector<MomentumDistribution> distributions;
  EvolutionDiagnostics diagnostics;
};

struct EvolveOptions {
  TruncationPolicy policy;
  bool keep_distributions = false;
  /// Number of sample times (evenly spread over the sample list) at which the
  /// smallest eigenvalue of rho is computed.
  int positivity_checks = 0;
  /// Record the interior unitarity residual of every operator built.
  bool check_unitarity = false;
};

/// Step-by-step dense evolution with automatic window growth.
class DenseEvolver {
 public:
  DenseEvolver(KrausChannel channel, const DensityMatrix& initial, TruncationPolicy policy = {});

  /// Grows the window if needed, then applies one Kraus step.  Throws
  /// ResourceError past policy.max_size, TruncationError on trace drift.
  void step();

  long n() const noexcept { return n_; }
  const DensityMatrix& state() const noexcept { return rho_; }
  const KrausChannel& channel() const noexcept { return channel_; }
  const FloquetOperator& u1() const noexcept { return *u1_; }
  const FloquetOperator& u2() const noexcept { return *u2_; }

  /// Number of times U1/U2 were (re)built, including construction.
  int builds() const noexcept { return builds_; }

 private:
  void rebuild_operators();

  KrausChannel channel_;
  TruncationPolicy policy_;
  DensityMatrix rho_;
  std::optional<FloquetOperator> u1_;
  std::optional<FloquetOperator> u2_;
  long n_ = 0;
  int builds_ = 0;
};

/// Iterates the channel from `initial` up to n_max, recording sigma^2(n) and
/// C(n) = Tr rho^2 at each sample time (sorted, unique, within [0, n_max]).
EvolutionRecord evolve(const KrausChannel& channel, long n_max, const DensityMatrix& initial,
                       std::span<const long> sample_times, const EvolveOptions& options = {});

/// evolve() from |0><0| on initial_window().
EvolutionRecord evolve(const KrausChannel& channel, long n_max, std::span<const long> sample_times,
                       const EvolveOptions& options = {});

struct MonteCarloOptions {
  TruncationPolicy policy;
  int workers = 1;
  bool keep_distributions = false;
};

/// Unravels the channel into n_traj pure-state trajectories starting from
/// |0>, each kick applying U1 with probability alpha and U2 otherwise.
/// Trajectory k draws from its own generator seeded by (seed, k), so the
/// result is bitwise independent of the worker count.
///
/// sigma^2 is the plug-in estimate from the averaged distribution; purity is
/// the pair estimator (1/(M(M-1))) sum_{i != j} |<psi_i|psi_j>|^2.
EvolutionRecord monte_carlo_evolve(const KrausChannel& channel, long n_max, long n_traj,
                                   std::uint64_t seed, std::span<const long> sample_times,
                                   const MonteCarloOptions& options = {});

/// Sorted unique copy of `times`; throws ConfigError for entries outside [0, n_max].
std::vector<long> normalized_sample_times(std::span<const long> times, long n_max);

}  // namespace qkr
