#include "qkr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/specfun.hpp"

namespace qkr {

namespace {

constexpr double kTraceDriftLimit = 1e-8;
constexpr double kPerStepDriftBudget = 1e-12;

void require_same_window(const DensityMatrix& rho, const FloquetOperator& u) {
  if (!(rho.window() == u.window())) {
    throw UsageError("operator window [" + std::to_string(u.window().l_min()) + ", " +
                     std::to_string(u.window().l_max()) + "] does not match state window [" +
                     std::to_string(rho.window().l_min()) + ", " + std::to_string(rho.window().l_max()) + "]");
  }
}

// Indices into the sample list where positivity is checked.
std::vector<std::size_t> spread_indices(std::size_t samples, int count) {
  std::vector<std::size_t> out;
  if (samples == 0 || count <= 0) return out;
  if (static_cast<std::size_t>(count) >= samples) {
    for (std::size_t i = 0; i < samples; ++i) out.push_back(i);
    return out;
  }
  for (int k = 0; k < count; ++k) {
    const double pos = count == 1 ? static_cast<double>(samples - 1)
                                  : static_cast<double>(k) * static_cast<double>(samples - 1) / (count - 1);
    out.push_back(static_cast<std::size_t>(std::llround(pos)));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

KrausChannel::KrausChannel(double kappa1, double kappa2, double alpha, ResonanceOrder resonance)
    : kappa1_(kappa1), kappa2_(kappa2), alpha_(alpha), resonance_(resonance) {
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2)) throw ConfigError("kick strengths must be finite");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

int KrausChannel::half_bandwidth() const {
  return std::max(bessel_order_cutoff(kappa1_), bessel_order_cutoff(kappa2_));
}

long TruncationPolicy::growth_for(int half_bandwidth) const {
  return growth >= 0 ? growth : std::max(32L, 2L * half_bandwidth);
}

DensityMatrix kraus_step(const DensityMatrix& rho, const FloquetOperator& u1, const FloquetOperator& u2,
                         double alpha) {
  require_same_window(rho, u1);
  require_same_window(rho, u2);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");

  const long n = rho.window().size();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd left;
  Eigen::MatrixXcd both;
  auto add_branch = [&](const FloquetOperator& u, double weight) {
    // U (U rho)^dagger = U rho U^dagger for Hermitian rho.
    u.apply_columns(rho.matrix(), left);
    const Eigen::MatrixXcd left_adj = left.adjoint();
    u.apply_columns(left_adj, both);
    acc += weight * both;
  };
  if (alpha > 0.0) add_branch(u1, alpha);
  if (alpha < 1.0) add_branch(u2, 1.0 - alpha);

  Eigen::MatrixXcd sym = 0.5 * (acc + acc.adjoint());
  DensityMatrix out(rho.window(), std::move(sym));
  const double drift = std::abs(out.trace() - 1.0);
  if (drift > kTraceDriftLimit) {
    throw TruncationError("trace drifted by " + std::to_string(drift) +
                              " in one Kraus step; the basis window is too small",
                          -1);
  }
  return out;
}

EdgeMass edge_mass(const MomentumDistribution& dist, long pad) {
  EdgeMass em;
  const auto size = static_cast<long>(dist.p.size());
  const long k = std::min(std::max(pad, 0L), size);
  for (long i = 0; i < k; ++i) {
    em.lower += dist.p[static_cast<std::size_t>(i)];
    em.upper += dist.p[static_cast<std::size_t>(size - 1 - i)];
  }
  return em;
}

DensityMatrix grow_window(const DensityMatrix& rho, double tail_tol, long pad, long growth) {
  if (!(tail_tol > 0.0)) throw ConfigError("tail tolerance must be positive");
  const EdgeMass em = edge_mass(momentum_distribution(rho), pad);
  const BasisWindow& w = rho.window();
  const long lo = em.lower > tail_tol ? w.l_min() - growth : w.l_min();
  const long hi = em.upper > tail_tol ? w.l_max() + growth : w.l_max();
  if (lo == w.l_min() && hi == w.l_max()) return rho;
  return rho.embedded(BasisWindow(lo, hi));
}

BasisWindow initial_window(const KrausChannel& channel, const TruncationPolicy& policy) {
  const int w = channel.half_bandwidth();
  return BasisWindow::symmetric(w + policy.pad_for(w) + policy.growth_for(w));
}

DenseEvolver::DenseEvolver(KrausChannel channel, const DensityMatrix& initial, TruncationPolicy policy)
    : channel_(channel), policy_(policy), rho_(initial) {
  const BasisWindow base = initial_window(channel_, policy_);
  const BasisWindow& cur = rho_.window();
  if (cur.l_min() > base.l_min() || cur.l_max() < base.l_max()) {
    rho_ = rho_.embedded(BasisWindow(std::min(cur.l_min(), base.l_min()), std::max(cur.l_max(), base.l_max())));
  }
  if (rho_.window().size() > policy_.max_size) {
    throw ResourceError("initial basis window of " + std::to_string(rho_.window().size()) +
                            " sites exceeds the cap of " + std::to_string(policy_.max_size),
                        0);
  }
  rebuild_operators();
}

void DenseEvolver::rebuild_operators() {
  u1_.emplace(build_floquet(channel_.kappa1(), channel_.resonance(), rho_.window()));
  u2_.emplace(build_floquet(channel_.kappa2(), channel_.resonance(), rho_.window()));
  ++builds_;
}

void DenseEvolver::step() {
  const int w = channel_.half_bandwidth();
  const long pad = policy_.pad_for(w);
  const long growth = policy_.growth_for(w);
  bool grown = false;
  for (;;) {
    DensityMatrix next = grow_window(rho_, policy_.tail_tol, pad, growth);
    if (next.window() == rho_.window()) break;
    if (next.window().size() > policy_.max_size) {
      throw ResourceError("basis window would grow to " + std::to_string(next.window().size()) +
                              " sites, beyond the cap of " + std::to_string(policy_.max_size) +
                              "; evolution reached n = " + std::to_string(n_),
                          n_);
    }
    rho_ = std::move(next);
    grown = true;
  }
  if (grown) rebuild_operators();

  try {
    rho_ = kraus_step(rho_, *u1_, *u2_, channel_.alpha());
  } catch (const TruncationError& e) {
    throw TruncationError(std::string(e.what()) + "; evolution reached n = " + std::to_string(n_), n_);
  }
  ++n_;
}

std::vector<long> normalized_sample_times(std::span<const long> times, long n_max) {
  std::vector<long> out(times.begin(), times.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && (out.front() < 0 || out.back() > n_max)) {
    throw ConfigError("sample times must lie in [0, " + std::to_string(n_max) + "]");
  }
  return out;
}

EvolutionRecord evolve(const KrausChannel& channel, long n_max, const DensityMatrix& initial,
                       std::span<const long> sample_times, const EvolveOptions& options) {
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  EvolutionRecord rec;
  rec.sample_times = normalized_sample_times(sample_times, n_max);
  const auto eigen_at = spread_indices(rec.sample_times.size(), options.positivity_checks);

  DenseEvolver ev(channel, initial, options.policy);
  auto& diag = rec.diagnostics;
  auto note_operators = [&] {
    if (!options.check_unitarity) return;
    diag.max_unitarity_residual = std::max(
        {diag.max_unitarity_residual, ev.u1().interior_unitarity_residual(), ev.u2().interior_unitarity_residual()});
  };
  note_operators();

  double prev_purity = purity(ev.state());
  std::size_t next_sample = 0;
  std::size_t next_eigen = 0;
  for (long n = 0;; ++n) {
    const double drift = std::abs(ev.state().trace() - 1.0);
    diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
    if (drift > static_cast<double>(n) * kPerStepDriftBudget && n > 0) diag.trace_drift_within_bound = false;

    if (next_sample < rec.sample_times.size() && rec.sample_times[next_sample] == n) {
      const MomentumDistribution dist = momentum_distribution(ev.state());
      rec.sigma2.push_back(variance(dist));
      rec.coherence.push_back(purity(ev.state()));
      diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, ev.state().hermiticity_error());
      if (next_eigen < eigen_at.size() && eigen_at[next_eigen] == next_sample) {
        diag.eigen_check_times.push_back(n);
        diag.min_eigenvalues.push_back(ev.state().min_eigenvalue());
        ++next_eigen;
      }
      if (options.keep_distributions) rec.distributions.push_back(dist);
      ++next_sample;
    }
    if (n == n_max) break;

    const int builds = ev.builds();
    ev.step();
    if (ev.builds() != builds) note_operators();
    const double c = purity(ev.state());
    diag.max_purity_increase = std::max(diag.max_purity_increase, c - prev_purity);
    prev_purity = c;
  }
  diag.final_window_size = ev.state().window().size();
  return rec;
}

EvolutionRecord evolve(const KrausChannel& channel, long n_max, std::span<const long> sample_times,
                       const EvolveOptions& options) {
  const DensityMatrix initial = DensityMatrix::pure_momentum(initial_window(channel, options.policy), 0);
  return evolve(channel, n_max, initial, sample_times, options);
}

}  // namespace qkr
