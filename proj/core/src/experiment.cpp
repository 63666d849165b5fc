#include "qkr/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "qkr/closedform.hpp"
#include "qkr/errors.hpp"

namespace qkr {

namespace {

constexpr int kPositivityChecks = 10;

TimeSeries positive_series(const std::vector<long>& n, const std::vector<double>& y) {
  TimeSeries s;
  for (std::size_t i = 0; i < n.size() && i < y.size(); ++i) {
    if (n[i] >= 1 && y[i] > 0.0) {
      s.n.push_back(n[i]);
      s.y.push_back(y[i]);
    }
  }
  return s;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

struct FitRow {
  std::string series;
  const FitResult* fit;
  std::string note;
};

std::vector<FitRow> fit_rows(const ExperimentFits& fits) {
  std::vector<FitRow> rows;
  if (fits.sigma_power) rows.push_back({"sigma", &*fits.sigma_power, ""});
  if (fits.coherence_power) rows.push_back({"coherence", &*fits.coherence_power, ""});
  if (fits.coherence_models) {
    const auto& m = *fits.coherence_models;
    rows.push_back({"coherence_full", &m.power, m.best == FitModel::power ? "selected" : ""});
    rows.push_back({"coherence_full", &m.exponential, m.best == FitModel::exponential ? "selected" : ""});
  }
  return rows;
}

}  // namespace

FitWindow experiment_fit_window(const ExperimentConfig& config, const TimeSeries& series) {
  if (config.fit_window > 0) return trailing_window(series, static_cast<std::size_t>(config.fit_window));
  if (config.grid == SampleGrid::log) return last_decade_window(series);
  return default_window(series);
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  validate(config);
  ExperimentResult res;
  res.config = config;
  const KrausChannel channel(config.kappa1, config.kappa2, config.alpha, ResonanceOrder(config.p, config.q));
  const std::vector<long> grid = sample_grid(config);

  TruncationPolicy policy;
  policy.tail_tol = config.tail_tol;
  policy.max_size = config.window_cap;

  switch (config.mode) {
    case Mode::closed_form:
      res.n = grid;
      for (long n : grid) {
        res.sigma2.push_back(variance_sum(n, channel));
        res.coherence.push_back(coherence_exact(n, channel));
      }
      break;
    case Mode::dense: {
      EvolveOptions opts;
      opts.policy = policy;
      opts.positivity_checks = kPositivityChecks;
      opts.check_unitarity = true;
      EvolutionRecord rec = evolve(channel, config.n_max, grid, opts);
      res.n = std::move(rec.sample_times);
      res.sigma2 = std::move(rec.sigma2);
      res.coherence = std::move(rec.coherence);
      res.diagnostics = std::move(rec.diagnostics);
      break;
    }
    case Mode::monte_carlo: {
      MonteCarloOptions opts;
      opts.policy = policy;
      opts.workers = workers;
      EvolutionRecord rec = monte_carlo_evolve(channel, config.n_max, config.trajectories, config.seed, grid, opts);
      res.n = std::move(rec.sample_times);
      res.sigma2 = std::move(rec.sigma2);
      res.coherence = std::move(rec.coherence);
      res.sigma2_stderr = std::move(rec.sigma2_stderr);
      res.coherence_stderr = std::move(rec.coherence_stderr);
      res.diagnostics = std::move(rec.diagnostics);
      break;
    }
  }

  std::vector<double> sigma(res.sigma2.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::sqrt(std::max(0.0, res.sigma2[i]));
  const TimeSeries sigma_series = positive_series(res.n, sigma);
  const TimeSeries coherence_series = positive_series(res.n, res.coherence);

  auto attempt = [&res](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const FitError& e) {
      res.fits.warnings.push_back(std::string(what) + ": " + e.what());
    }
  };
  attempt("sigma fit", [&] {
    res.fits.sigma_power = fit_power_law(sigma_series, experiment_fit_window(config, sigma_series));
  });
  attempt("coherence fit", [&] {
    res.fits.coherence_power = fit_power_law(coherence_series, experiment_fit_window(config, coherence_series));
  });
  attempt("coherence model comparison", [&] {
    res.fits.coherence_models = compare_models(coherence_series, full_window(coherence_series));
  });
  return res;
}

void write_series_csv(std::ostream& out, const ExperimentResult& result) {
  out << "# qkr experiment\n";
  std::istringstream cfg(render_config(result.config));
  for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
  out << "n,sigma,sigma2,coherence\n";
  for (std::size_t i = 0; i < result.n.size(); ++i) {
    out << result.n[i] << ',';
    if (i < result.sigma2.size()) {
      out << format_double(std::sqrt(std::max(0.0, result.sigma2[i]))) << ',' << format_double(result.sigma2[i]);
    } else {
      out << ',';
    }
    out << ',';
    if (i < result.coherence.size()) out << format_double(result.coherence[i]);
    out << '\n';
  }
}

void write_fit_summary(std::ostream& out, const ExperimentResult& result) {
  const auto& c = result.config;
  out << "experiment " << c.label << ": mode=" << to_string(c.mode) << " kappa1=" << short_number(c.kappa1)
      << " kappa2=" << short_number(c.kappa2) << " alpha=" << short_number(c.alpha) << " p/q=" << c.p << '/'
      << c.q << " n_max=" << c.n_max << '\n';
  out << std::left << std::setw(16) << "series" << std::setw(13) << "model" << std::setw(18) << "window"
      << std::setw(8) << "points" << std::setw(24) << "exponent" << std::setw(24) << "log_prefactor"
      << std::setw(24) << "rms_residual" << "note\n";
  for (const auto& row : fit_rows(result.fits)) {
    const FitResult& f = *row.fit;
    const std::string window = "[" + std::to_string(f.window.n_lo) + ", " + std::to_string(f.window.n_hi) + "]";
    out << std::left << std::setw(16) << row.series << std::setw(13) << to_string(f.model) << std::setw(18)
        << window << std::setw(8) << f.points << std::setw(24) << format_double(f.exponent) << std::setw(24)
        << format_double(f.log_prefactor) << std::setw(24) << format_double(f.rms_residual) << row.note << '\n';
  }
  for (const auto& w : result.fits.warnings) out << "warning: " << w << '\n';
  if (result.diagnostics) {
    const auto& d = *result.diagnostics;
    out << "diagnostics: max_trace_drift=" << format_double(d.max_trace_drift)
        << " max_hermiticity_error=" << format_double(d.max_hermiticity_error)
        << " max_purity_increase=" << format_double(d.max_purity_increase)
        << " max_unitarity_residual=" << format_double(d.max_unitarity_residual)
        << " final_window=" << d.final_window_size << '\n';
    if (!d.min_eigenvalues.empty()) {
      out << "min_eigenvalues:";
      for (std::size_t i = 0; i < d.min_eigenvalues.size(); ++i) {
        out << ' ' << d.eigen_check_times[i] << ':' << format_double(d.min_eigenvalues[i]);
      }
      out << '\n';
    }
  }
}

void write_fit_csv(std::ostream& out, const ExperimentResult& result) {
  out << "series,model,n_lo,n_hi,points,exponent,log_prefactor,rms_residual,selected\n";
  for (const auto& row : fit_rows(result.fits)) {
    const FitResult& f = *row.fit;
    out << row.series << ',' << to_string(f.model) << ',' << f.window.n_lo << ',' << f.window.n_hi << ','
        << f.points << ',' << format_double(f.exponent) << ',' << format_double(f.log_prefactor) << ','
        << format_double(f.rms_residual) << ',' << (row.note == "selected" ? 1 : 0) << '\n';
  }
}

ExperimentFiles write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
  ExperimentFiles files{dir / (result.config.label + ".csv"), dir / (result.config.label + "_fits.txt"),
                        dir / (result.config.label + "_fits.csv")};
  std::ostringstream series, summary, fits;
  write_series_csv(series, result);
  write_fit_summary(summary, result);
  write_fit_csv(fits, result);
  write_file(files.series_csv, series.str());
  write_file(files.fits_txt, summary.str());
  write_file(files.fits_csv, fits.str());
  return files;
}

std::vector<SweepPoint> run_sweep(const std::vector<ExperimentConfig>& grid, const std::filesystem::path& out_dir,
                                  int workers) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<SweepPoint> points(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) points[i].config = grid[i];

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepPoint& pt = points[i];
      try {
        pt.result = run_experiment(pt.config);
        write_experiment(*pt.result, out_dir);
      } catch (const std::exception& e) {
        pt.result.reset();
        pt.error = e.what();
        if (pt.error.empty()) pt.error = "unknown failure";
      }
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream text, csv;
  write_sweep_summary(text, points);
  write_sweep_summary_csv(csv, points);
  write_file(out_dir / "summary.txt", text.str());
  write_file(out_dir / "summary.csv", csv.str());
  return points;
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << std::left << std::setw(20) << "label" << std::setw(13) << "mode" << std::setw(10) << "kappa1"
      << std::setw(10) << "kappa2" << std::setw(8) << "alpha" << std::setw(6) << "p/q" << std::setw(9) << "n_max"
      << std::setw(12) << "sigma_c" << std::setw(12) << "gamma" << std::setw(13) << "C_model" << std::setw(12)
      << "delta" << "status\n";
  auto num = [](const std::optional<double>& v) { return v ? short_number(*v) : std::string("-"); };
  for (const auto& pt : points) {
    const auto& c = pt.config;
    std::optional<double> sigma_c, gamma, delta;
    std::string model = "-";
    if (pt.result) {
      const auto& f = pt.result->fits;
      if (f.sigma_power) sigma_c = f.sigma_power->exponent;
      if (f.coherence_power) gamma = -f.coherence_power->exponent;
      if (f.coherence_models) {
        model = std::string(to_string(f.coherence_models->best));
        delta = f.coherence_models->exponential.exponent;
      }
    }
    out << std::left << std::setw(20) << c.label << std::setw(13) << to_string(c.mode) << std::setw(10)
        << short_number(c.kappa1) << std::setw(10) << short_number(c.kappa2) << std::setw(8)
        << short_number(c.alpha) << std::setw(6) << (std::to_string(c.p) + "/" + std::to_string(c.q))
        << std::setw(9) << c.n_max << std::setw(12) << num(sigma_c) << std::setw(12) << num(gamma)
        << std::setw(13) << model << std::setw(12) << num(delta) << (pt.error.empty() ? "ok" : "error: " + pt.error)
        << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "label,mode,kappa1,kappa2,alpha,p,q,n_max,sigma_exponent,sigma_residual,coherence_exponent,"
         "coherence_residual,coherence_model,power_residual_full,exponential_residual_full,delta,status\n";
  auto opt = [](bool has, double v) { return has ? format_double(v) : std::string(); };
  for (const auto& pt : points) {
    const auto& c = pt.config;
    out << c.label << ',' << to_string(c.mode) << ',' << format_double(c.kappa1) << ',' << format_double(c.kappa2)
        << ',' << format_double(c.alpha) << ',' << c.p << ',' << c.q << ',' << c.n_max << ',';
    const ExperimentFits empty;
    const ExperimentFits& f = pt.result ? pt.result->fits : empty;
    out << opt(f.sigma_power.has_value(), f.sigma_power ? f.sigma_power->exponent : 0.0) << ','
        << opt(f.sigma_power.has_value(), f.sigma_power ? f.sigma_power->rms_residual : 0.0) << ','
        << opt(f.coherence_power.has_value(), f.coherence_power ? f.coherence_power->exponent : 0.0) << ','
        << opt(f.coherence_power.has_value(), f.coherence_power ? f.coherence_power->rms_residual : 0.0) << ',';
    if (f.coherence_models) {
      const auto& m = *f.coherence_models;
      out << to_string(m.best) << ',' << format_double(m.power.rms_residual) << ','
          << format_double(m.exponential.rms_residual) << ',' << format_double(m.exponential.exponent) << ',';
    } else {
      out << ",,,,";
    }
    std::string status = pt.error.empty() ? "ok" : "error: " + pt.error;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << status << '\n';
  }
}

std::vector<ExperimentConfig> parse_grid(std::string_view text, const ExperimentConfig& base) {
  std::vector<ExperimentConfig> out;
  std::size_t pos = 0;
  int line_no = 1;
  int block_start = 1;
  std::string block;
  auto flush = [&] {
    bool has_content = false;
    std::istringstream lines(block);
    for (std::string l; !has_content && std::getline(lines, l);) {
      has_content = l.substr(0, l.find('#')).find_first_not_of(" \t\r") != std::string::npos;
    }
    if (!has_content) return;
    ExperimentConfig cfg = base;
    cfg.label.clear();
    cfg = parse_settings(block, cfg, block_start);
    if (cfg.label.empty()) cfg.label = "point" + std::to_string(out.size());
    if (const auto issue = find_issue(cfg)) {
      throw ConfigError("grid block starting at line " + std::to_string(block_start) + ": " + issue->field + ": " +
                        issue->message);
    }
    out.push_back(std::move(cfg));
  };
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    const auto first = line.find_first_not_of(" \t\r");
    const bool separator = first != std::string_view::npos && line.substr(first).starts_with("---");
    if (separator) {
      flush();
      block.clear();
      block_start = line_no + 1;
    } else {
      block.append(line);
      block.push_back('\n');
    }
    ++line_no;
    pos = end + 1;
    if (end == text.size()) break;
  }
  flush();
  if (out.empty()) throw ConfigError("sweep grid holds no points");
  return out;
}

std::vector<ExperimentConfig> preset(std::string_view name) {
  std::vector<ExperimentConfig> out;
  if (name == "fig1") {
    // Only the gap matters for C(n); kappa2 = 0.1 puts the gap at 1000.
    for (double alpha : {0.1, 0.2, 0.3, 0.5}) {
      ExperimentConfig c;
      c.mode = Mode::closed_form;
      c.kappa1 = 1000.1;
      c.kappa2 = 0.1;
      c.alpha = alpha;
      c.n_max = 10000;
      c.grid = SampleGrid::log;
      c.grid_density = 64;
      c.label = "fig1_alpha" + short_number(alpha);
      out.push_back(c);
    }
  } else if (name == "fig2") {
    for (double gap : {0.2, 0.3, 1.0, 10.0}) {
      ExperimentConfig c;
      c.mode = Mode::closed_form;
      c.kappa1 = 0.1 + gap;
      c.kappa2 = 0.1;
      c.alpha = 0.1;
      c.n_max = 10000;
      c.grid = SampleGrid::log;
      c.grid_density = 64;
      c.label = "fig2_dk" + short_number(gap);
      out.push_back(c);
    }
  } else if (name == "fig3") {
    for (double alpha : {0.1, 0.2, 0.5}) {
      ExperimentConfig c;
      c.mode = Mode::dense;
      c.kappa1 = 0.1;
      c.kappa2 = 0.2;
      c.alpha = alpha;
      c.p = 1;
      c.q = 3;
      c.n_max = 2000;
      c.grid = SampleGrid::linear;
      c.grid_density = 1;
      c.label = "fig3_alpha" + short_number(alpha);
      out.push_back(c);
    }
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig1, fig2 or fig3)");
  }
  return out;
}

}  // namespace qkr
