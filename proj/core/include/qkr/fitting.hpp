#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace qkr {

/// Observable values y sampled at strictly increasing kick counts n.
struct TimeSeries {
  std::vector<long> n;
  std::vector<double> y;

  std::size_t size() const noexcept { return n.size(); }

  /// Throws FitError unless the arrays align and n is strictly increasing.
  void validate() const;
};

enum class FitModel { power, exponential };

std::string_view to_string(FitModel model);

/// Inclusive range of kick counts used by a fit.
struct FitWindow {
  long n_lo = 0;
  long n_hi = 0;
};

struct FitResult {
  FitModel model = FitModel::power;
  /// Power law: the log-log slope (c for sigma, -gamma for C).
  /// Exponential: the decay rate delta of exp(-delta n).
  double exponent = 0.0;
  double log_prefactor = 0.0;
  /// RMS residual of log y.
  double rms_residual = 0.0;
  FitWindow window;
  std::size_t points = 0;
};

/// Least squares on (log n, log y).  Needs >= 8 points, all y > 0 and n > 0.
FitResult fit_power_law(const TimeSeries& series, const FitWindow& window);

/// Least squares on (n, log y); exponent = -slope.
FitResult fit_exponential(const TimeSeries& series, const FitWindow& window);

struct ModelComparison {
  FitModel best = FitModel::power;
  FitResult power;
  FitResult exponential;
};

/// Fits both models and picks the one with the smaller RMS log residual.
ModelComparison compare_models(const TimeSeries& series, const FitWindow& window);

/// Every sample.
FitWindow full_window(const TimeSeries& series);

/// The last `count` samples (all of them if the series is shorter).
FitWindow trailing_window(const TimeSeries& series, std::size_t count);

/// Samples with n >= n_last / 10.
FitWindow last_decade_window(const TimeSeries& series);

/// Last 1000 samples once the series holds at least 2000, otherwise the
/// last half.
FitWindow default_window(const TimeSeries& series);

}  // namespace qkr
