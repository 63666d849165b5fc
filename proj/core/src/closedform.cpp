#include "qkr/closedform.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qkr/errors.hpp"
#include "qkr/specfun.hpp"

namespace qkr {

namespace {

void require_primary(const KrausChannel& channel, const char* what) {
  if (!channel.resonance().is_primary()) {
    throw UnsupportedRegimeError(std::string(what) + " needs commuting kick operators (q = 1), got q = " +
                                 std::to_string(channel.resonance().q()));
  }
}

void require_n(long n) {
  if (n < 0) throw DomainError("kick count n must be >= 0");
}

}  // namespace

BinomialWeights::BinomialWeights(long n, double alpha, double relative_cutoff) : n_(n), alpha_(alpha) {
  require_n(n);
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  const double beta = 1.0 - alpha;
  if (n == 0 || alpha == 1.0 || beta == 0.0) {
    j_min_ = 0;
    weights_ = {1.0};
    log_weights_ = {0.0};
    return;
  }
  if (alpha == 0.0) {
    j_min_ = n;
    weights_ = {1.0};
    log_weights_ = {0.0};
    return;
  }

  const double nn = static_cast<double>(n);
  const long mode = std::min(n, static_cast<long>(std::floor((nn + 1.0) * beta)));
  const double log_alpha = std::log(alpha);
  const double log_beta = std::log1p(-alpha);
  const double log_ratio = log_beta - log_alpha;
  const double log_floor = std::log(relative_cutoff);

  // Log weights relative to the mode, walked outward with exact term ratios.
  std::vector<double> up;  // j = mode, mode+1, ...
  up.push_back(0.0);
  for (long j = mode; j < n; ++j) {
    const double next = up.back() + std::log(static_cast<double>(n - j) / static_cast<double>(j + 1)) + log_ratio;
    if (next < log_floor) break;
    up.push_back(next);
  }
  std::vector<double> down;  // j = mode-1, mode-2, ...
  double cur = 0.0;
  for (long j = mode; j > 0; --j) {
    cur += std::log(static_cast<double>(j) / static_cast<double>(n - j + 1)) - log_ratio;
    if (cur < log_floor) break;
    down.push_back(cur);
  }

  j_min_ = mode - static_cast<long>(down.size());
  std::vector<double> rel(down.rbegin(), down.rend());
  rel.insert(rel.end(), up.begin(), up.end());

  weights_.resize(rel.size());
  double total = 0.0;
  for (std::size_t k = 0; k < rel.size(); ++k) {
    weights_[k] = std::exp(rel[k]);
    total += weights_[k];
  }
  log_weights_.resize(rel.size());
  const double log_total = std::log(total);
  for (std::size_t k = 0; k < rel.size(); ++k) {
    weights_[k] /= total;
    log_weights_[k] = rel[k] - log_total;
  }
}

double BinomialWeights::weight(long j) const noexcept {
  if (j < j_min_ || j > j_max()) return 0.0;
  return weights_[static_cast<std::size_t>(j - j_min_)];
}

double BinomialWeights::log_weight(long j) const noexcept {
  if (j < j_min_ || j > j_max()) return -std::numeric_limits<double>::infinity();
  return log_weights_[static_cast<std::size_t>(j - j_min_)];
}

double accumulated_strength(long n, long j, double kappa1, double kappa2) {
  return static_cast<double>(n - j) * kappa1 + static_cast<double>(j) * kappa2;
}

double probability(long l, long n, const KrausChannel& channel) {
  require_primary(channel, "closed-form probability");
  const BinomialWeights bw(n, channel.alpha());
  CompensatedSum acc;
  for (long j = bw.j_min(); j <= bw.j_max(); ++j) {
    const double jl = bessel_j(static_cast<int>(l), accumulated_strength(n, j, channel.kappa1(), channel.kappa2()));
    acc.add(bw.weight(j) * jl * jl);
  }
  return acc.value();
}

MomentumDistribution probability_distribution(long n, const KrausChannel& channel, const BasisWindow& window) {
  require_primary(channel, "closed-form probability");
  const BinomialWeights bw(n, channel.alpha());
  const int m_max = static_cast<int>(std::max(-window.l_min(), window.l_max()));
  std::vector<double> p(static_cast<std::size_t>(window.size()), 0.0);
  for (long j = bw.j_min(); j <= bw.j_max(); ++j) {
    const BesselRow row = bessel_j_row(accumulated_strength(n, j, channel.kappa1(), channel.kappa2()), m_max);
    const double wj = bw.weight(j);
    for (long l = window.l_min(); l <= window.l_max(); ++l) {
      const double v = row[static_cast<int>(l)];
      p[static_cast<std::size_t>(window.index(l))] += wj * v * v;
    }
  }
  return MomentumDistribution{window, std::move(p)};
}

double variance_sum(long n, const KrausChannel& channel) {
  require_primary(channel, "closed-form variance");
  const BinomialWeights bw(n, channel.alpha());
  CompensatedSum acc;
  for (long j = bw.j_min(); j <= bw.j_max(); ++j) {
    const double r = accumulated_strength(n, j, channel.kappa1(), channel.kappa2());
    acc.add(bw.weight(j) * 0.5 * r * r);
  }
  return acc.value();
}

double variance_formula(long n, const KrausChannel& channel, double prefactor) {
  const double a = channel.alpha();
  const double b = channel.beta();
  const double mean_kick = a * channel.kappa1() + b * channel.kappa2();
  const double dk = channel.delta_kappa();
  const double nn = static_cast<double>(n);
  return prefactor * (mean_kick * mean_kick * nn * nn + dk * dk * a * b * nn);
}

double coherence_exact(long n, const KrausChannel& channel) {
  require_primary(channel, "closed-form coherence");
  const BinomialWeights bw(n, channel.alpha());
  const auto w = bw.weights();
  const auto k = static_cast<long>(w.size());
  const double dk = channel.delta_kappa();

  double total = 0.0;
  for (long d = k - 1; d >= 0; --d) {
    double a = 0.0;
    for (long j = 0; j + d < k; ++j) a += w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j + d)];
    if (d == 0) {
      total += a;
    } else {
      const double j0 = bessel_j(0, static_cast<double>(d) * dk);
      total += 2.0 * a * j0 * j0;
    }
  }
  return total;
}

double coherence_largegap(long n, double alpha) {
  const BinomialWeights bw(n, alpha);
  double total = 0.0;
  for (double v : bw.weights()) total += v * v;
  return total;
}

double coherence_asymptote(long n) {
  if (n < 1) throw DomainError("coherence asymptote needs n >= 1");
  return 1.0 / std::sqrt(std::numbers::pi * static_cast<double>(n));
}

}  // namespace qkr
