#include "qkr/fitting.hpp"

#include <cmath>
#include <string>

#include "qkr/errors.hpp"

namespace qkr {

namespace {

constexpr std::size_t kMinFitPoints = 8;

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double xbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw FitError("fit abscissae are all equal");
  Line line;
  line.slope = sxy / sxx;
  line.intercept = ybar - line.slope * xbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ss += r * r;
  }
  line.rms = std::sqrt(ss / m);
  return line;
}

FitResult fit_line(const TimeSeries& series, const FitWindow& window, FitModel model) {
  series.validate();
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const long n = series.n[i];
    if (n < window.n_lo || n > window.n_hi) continue;
    const double v = series.y[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw FitError("log fit needs y > 0; got " + std::to_string(v) + " at n = " + std::to_string(n));
    }
    if (model == FitModel::power) {
      if (n <= 0) throw FitError("power-law fit needs n > 0");
      x.push_back(std::log(static_cast<double>(n)));
    } else {
      x.push_back(static_cast<double>(n));
    }
    y.push_back(std::log(v));
  }
  if (x.size() < kMinFitPoints) {
    throw FitError("fit window [" + std::to_string(window.n_lo) + ", " + std::to_string(window.n_hi) + "] holds " +
                   std::to_string(x.size()) + " points, need at least " + std::to_string(kMinFitPoints));
  }
  const Line line = least_squares(x, y);
  FitResult r;
  r.model = model;
  r.exponent = model == FitModel::power ? line.slope : -line.slope;
  r.log_prefactor = line.intercept;
  r.rms_residual = line.rms;
  r.window = window;
  r.points = x.size();
  return r;
}

}  // namespace

void TimeSeries::validate() const {
  if (n.size() != y.size()) throw FitError("time series arrays differ in length");
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (n[i] <= n[i - 1]) throw FitError("time series kick counts must be strictly increasing");
  }
}

std::string_view to_string(FitModel model) {
  return model == FitModel::power ? "power" : "exponential";
}

FitResult fit_power_law(const TimeSeries& series, const FitWindow& window) {
  return fit_line(series, window, FitModel::power);
}

FitResult fit_exponential(const TimeSeries& series, const FitWindow& window) {
  return fit_line(series, window, FitModel::exponential);
}

ModelComparison compare_models(const TimeSeries& series, const FitWindow& window) {
  ModelComparison c;
  c.power = fit_power_law(series, window);
  c.exponential = fit_exponential(series, window);
  c.best = c.exponential.rms_residual < c.power.rms_residual ? FitModel::exponential : FitModel::power;
  return c;
}

FitWindow full_window(const TimeSeries& series) {
  if (series.size() == 0) throw FitError("empty time series");
  return {series.n.front(), series.n.back()};
}

FitWindow trailing_window(const TimeSeries& series, std::size_t count) {
  if (series.size() == 0) throw FitError("empty time series");
  const std::size_t first = count >= series.size() ? 0 : series.size() - count;
  return {series.n[first], series.n.back()};
}

FitWindow last_decade_window(const TimeSeries& series) {
  if (series.size() == 0) throw FitError("empty time series");
  const long last = series.n.back();
  return {(last + 9) / 10, last};
}

FitWindow default_window(const TimeSeries& series) {
  const std::size_t count = series.size() >= 2000 ? 1000 : series.size() - series.size() / 2;
  return trailing_window(series, count);
}

}  // namespace qkr
