#include "qkr/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "qkr/channel.hpp"
#include "qkr/closedform.hpp"
#include "qkr/errors.hpp"
#include "qkr/observables.hpp"
#include "qkr/specfun.hpp"

namespace qkr {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult check(std::string name, const std::function<std::pair<bool, std::string>()>& body) {
  CheckResult r{std::move(name), false, {}};
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.detail = std::string("threw: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;

  out.push_back(check("bessel sum rules", [] {
    double worst_norm = 0.0;
    double worst_second = 0.0;
    for (double x : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
      const int m_max = bessel_order_cutoff(x);
      const BesselRow row = bessel_j_row(x, m_max);
      double norm = row[0] * row[0];
      double second = 0.0;
      for (int m = 1; m <= m_max; ++m) {
        norm += 2.0 * row[m] * row[m];
        second += 2.0 * m * m * row[m] * row[m];
      }
      worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
      worst_second = std::max(worst_second, std::abs(second / (0.5 * x * x) - 1.0));
    }
    return std::pair{worst_norm <= 1e-12 && worst_second <= 1e-10,
                     "norm " + sci(worst_norm) + ", second moment rel " + sci(worst_second)};
  }));

  out.push_back(check("interior unitarity", [] {
    const auto u = build_floquet(2.0, ResonanceOrder(1, 3), BasisWindow::symmetric(60));
    const double r = u.interior_unitarity_residual();
    return std::pair{r <= 1e-10, "residual " + sci(r)};
  }));

  out.push_back(check("commutation dichotomy", [] {
    const BasisWindow win = BasisWindow::symmetric(120);
    const double primary = commutator_norm(build_floquet(0.1, ResonanceOrder(1, 1), win),
                                           build_floquet(0.2, ResonanceOrder(1, 1), win));
    const double secondary = commutator_norm(build_floquet(0.1, ResonanceOrder(1, 3), win),
                                             build_floquet(0.2, ResonanceOrder(1, 3), win));
    return std::pair{primary <= 1e-10 && secondary > 1e-6, "q=1 " + sci(primary) + ", q=3 " + sci(secondary)};
  }));

  out.push_back(check("closed form vs dense (q=1)", [] {
    const KrausChannel ch(0.5, 1.3, 0.3);
    std::vector<long> times;
    for (long n = 0; n <= 20; ++n) times.push_back(n);
    EvolveOptions opts;
    opts.keep_distributions = true;
    const EvolutionRecord rec = evolve(ch, 20, times, opts);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const long n = times[i];
      worst = std::max(worst, std::abs(rec.sigma2[i] - variance_sum(n, ch)));
      worst = std::max(worst, std::abs(rec.coherence[i] - coherence_exact(n, ch)));
      const auto& dist = rec.distributions[i];
      const MomentumDistribution exact = probability_distribution(n, ch, dist.window);
      for (std::size_t k = 0; k < dist.p.size(); ++k) worst = std::max(worst, std::abs(dist.p[k] - exact.p[k]));
    }
    return std::pair{worst <= 1e-10, "max deviation " + sci(worst)};
  }));

  out.push_back(check("variance law prefactor", [] {
    const KrausChannel ch(0.5, 1.3, 0.3);
    double worst = 0.0;
    for (long n = 1; n <= 1000; n += 37) {
      worst = std::max(worst, std::abs(variance_formula(n, ch) / variance_sum(n, ch) - 1.0));
    }
    return std::pair{worst <= 1e-12, "relative deviation " + sci(worst)};
  }));

  out.push_back(check("channel invariants (q=3)", [] {
    const KrausChannel ch(0.1, 0.2, 0.5, ResonanceOrder(1, 3));
    std::vector<long> times;
    for (long n = 0; n <= 200; n += 10) times.push_back(n);
    EvolveOptions opts;
    opts.positivity_checks = 10;
    opts.check_unitarity = true;
    const auto rec = evolve(ch, 200, times, opts);
    const auto& d = rec.diagnostics;
    const double min_eig = *std::min_element(d.min_eigenvalues.begin(), d.min_eigenvalues.end());
    const bool ok = d.trace_drift_within_bound && d.max_hermiticity_error <= 1e-12 && min_eig >= -1e-10 &&
                    d.max_purity_increase <= 1e-10 && d.max_unitarity_residual <= 1e-10;
    return std::pair{ok, "trace drift " + sci(d.max_trace_drift) + ", min eigenvalue " + sci(min_eig) +
                             ", purity increase " + sci(d.max_purity_increase) + ", unitarity " +
                             sci(d.max_unitarity_residual)};
  }));

  out.push_back(check("large-gap Stirling limit", [] {
    double worst = 0.0;
    for (long n : {100L, 1000L, 10000L}) {
      worst = std::max(worst, std::abs(coherence_largegap(n, 0.5) / coherence_asymptote(n) - 1.0));
    }
    return std::pair{worst <= 0.02, "relative deviation " + sci(worst)};
  }));

  return out;
}

}  // namespace qkr
