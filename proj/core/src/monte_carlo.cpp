#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "qkr/channel.hpp"
#include "qkr/errors.hpp"

namespace qkr {

namespace {

std::mt19937_64 trajectory_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Fn>
void for_each_chunk(long count, int workers, Fn&& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers == 1) {
    fn(0L, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const long per = (count + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    const long lo = t * per;
    const long hi = std::min(count, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
}

struct TrajectoryEnsemble {
  BasisWindow window;
  Eigen::MatrixXcd psi;  // one trajectory per column
};

}  // namespace

EvolutionRecord monte_carlo_evolve(const KrausChannel& channel, long n_max, long n_traj, std::uint64_t seed,
                                   std::span<const long> sample_times, const MonteCarloOptions& options) {
  if (n_traj < 2) throw ConfigError("Monte Carlo needs at least 2 trajectories");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (options.workers < 1) throw ConfigError("Monte Carlo needs at least 1 worker");

  EvolutionRecord rec;
  rec.sample_times = normalized_sample_times(sample_times, n_max);
  const TruncationPolicy& policy = options.policy;
  const int w = channel.half_bandwidth();
  const long pad = policy.pad_for(w);
  const long growth = policy.growth_for(w);
  const double m_traj = static_cast<double>(n_traj);

  TrajectoryEnsemble ens{initial_window(channel, policy), {}};
  ens.psi = Eigen::MatrixXcd::Zero(ens.window.size(), n_traj);
  ens.psi.row(ens.window.index(0)).setOnes();

  std::vector<std::mt19937_64> engines;
  engines.reserve(static_cast<std::size_t>(n_traj));
  for (long k = 0; k < n_traj; ++k) engines.push_back(trajectory_engine(seed, static_cast<std::uint64_t>(k)));

  auto u1 = build_floquet(channel.kappa1(), channel.resonance(), ens.window);
  auto u2 = build_floquet(channel.kappa2(), channel.resonance(), ens.window);

  auto record_sample = [&] {
    const BasisWindow& win = ens.window;
    const long size = win.size();
    const Eigen::MatrixXd prob = ens.psi.cwiseAbs2();

    // Averaged distribution and per-trajectory moments.
    MomentumDistribution mean_dist{win, std::vector<double>(static_cast<std::size_t>(size))};
    Eigen::VectorXd ell(size);
    for (long i = 0; i < size; ++i) ell(i) = static_cast<double>(win.momentum(i));
    for (long i = 0; i < size; ++i) mean_dist.p[static_cast<std::size_t>(i)] = prob.row(i).sum() / m_traj;
    const Eigen::VectorXd first = prob.transpose() * ell;
    const Eigen::VectorXd second = prob.transpose() * ell.cwiseAbs2();
    const double mean_first = first.mean();
    const double s2 = variance(mean_dist);
    const Eigen::VectorXd infl = second.array() - 2.0 * mean_first * first.array();
    const double infl_var = (infl.array() - infl.mean()).square().sum() / (m_traj - 1.0);

    // Pair estimator of Tr rho^2 through rho_hat = Psi Psi^dagger / M.
    const Eigen::MatrixXcd rho_hat = ens.psi * ens.psi.adjoint() / m_traj;
    const Eigen::VectorXd norms2 = prob.colwise().sum().transpose();
    const Eigen::VectorXd norms4 = norms2.cwiseAbs2();
    const double pur = (m_traj * m_traj * rho_hat.squaredNorm() - norms4.sum()) / (m_traj * (m_traj - 1.0));
    const Eigen::MatrixXcd proj = rho_hat * ens.psi;
    Eigen::VectorXd h(n_traj);
    for (long k = 0; k < n_traj; ++k) {
      const double self = ens.psi.col(k).dot(proj.col(k)).real();
      h(k) = (m_traj * self - norms4(k)) / (m_traj - 1.0);
    }
    const double h_var = (h.array() - h.mean()).square().sum() / (m_traj - 1.0);

    rec.sigma2.push_back(s2);
    rec.sigma2_stderr.push_back(std::sqrt(infl_var / m_traj));
    rec.coherence.push_back(pur);
    rec.coherence_stderr.push_back(2.0 * std::sqrt(h_var / m_traj));
    rec.diagnostics.max_trace_drift = std::max(rec.diagnostics.max_trace_drift, std::abs(norms2.mean() - 1.0));
    if (options.keep_distributions) rec.distributions.push_back(std::move(mean_dist));
  };

  auto maybe_grow = [&](long n) {
    bool changed = false;
    for (;;) {
      const Eigen::MatrixXd prob = ens.psi.cwiseAbs2();
      const long size = ens.window.size();
      const long k = std::min(pad, size);
      const double lower = prob.topRows(k).sum() / m_traj;
      const double upper = prob.bottomRows(k).sum() / m_traj;
      const long lo_grow = lower > policy.tail_tol ? growth : 0;
      const long hi_grow = upper > policy.tail_tol ? growth : 0;
      if (lo_grow == 0 && hi_grow == 0) break;
      const BasisWindow next(ens.window.l_min() - lo_grow, ens.window.l_max() + hi_grow);
      if (next.size() > policy.max_size) {
        throw ResourceError("basis window would grow to " + std::to_string(next.size()) + " sites, beyond the cap of " +
                                std::to_string(policy.max_size) + "; evolution reached n = " + std::to_string(n),
                            n);
      }
      Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(next.size(), n_traj);
      grown.middleRows(lo_grow, size) = ens.psi;
      ens.psi = std::move(grown);
      ens.window = next;
      changed = true;
    }
    if (changed) {
      u1 = build_floquet(channel.kappa1(), channel.resonance(), ens.window);
      u2 = build_floquet(channel.kappa2(), channel.resonance(), ens.window);
    }
  };

  std::size_t next_sample = 0;
  for (long n = 0;; ++n) {
    if (next_sample < rec.sample_times.size() && rec.sample_times[next_sample] == n) {
      record_sample();
      ++next_sample;
    }
    if (n == n_max) break;
    maybe_grow(n);

    const long size = ens.window.size();
    for_each_chunk(n_traj, options.workers, [&](long lo, long hi) {
      std::vector<cplx> out(static_cast<std::size_t>(size));
      for (long k = lo; k < hi; ++k) {
        const bool first_branch = unit_uniform(engines[static_cast<std::size_t>(k)]) < channel.alpha();
        const FloquetOperator& u = first_branch ? u1 : u2;
        std::span<cplx> col(ens.psi.col(k).data(), static_cast<std::size_t>(size));
        u.apply_into(col, out);
        std::copy(out.begin(), out.end(), col.begin());
      }
    });
  }
  rec.diagnostics.final_window_size = ens.window.size();
  return rec;
}

}  // namespace qkr
