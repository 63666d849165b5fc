#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkr/channel.hpp"
#include "qkr/config.hpp"
#include "qkr/fitting.hpp"

namespace qkr {

/// Exponent fits attached to one run.  A fit that cannot be performed is
/// absent and leaves a note in `warnings`.
struct ExperimentFits {
  std::optional<FitResult> sigma_power;      // sigma ~ n^c over the fit window
  std::optional<FitResult> coherence_power;  // C ~ n^{-gamma} over the fit window
  std::optional<ModelComparison> coherence_models;  // power vs exponential, whole series
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<long> n;
  std::vector<double> sigma2;
  std::vector<double> coherence;
  std::vector<double> sigma2_stderr;     // Monte Carlo only
  std::vector<double> coherence_stderr;  // Monte Carlo only
  ExperimentFits fits;
  std::optional<EvolutionDiagnostics> diagnostics;  // dense and Monte Carlo runs
};

/// Window of the exponent fits: config.fit_window trailing samples if set,
/// else the last decade on a log grid and default_window() on a linear one.
FitWindow experiment_fit_window(const ExperimentConfig& config, const TimeSeries& series);

/// Validates the config, computes sigma, sigma^2 and C on the sample grid
/// and fits them.  Numerical failures surface as TruncationError or
/// ResourceError.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1);

/// `#`-prefixed provenance lines, then `n,sigma,sigma2,coherence`.
void write_series_csv(std::ostream& out, const ExperimentResult& result);
void write_fit_summary(std::ostream& out, const ExperimentResult& result);
void write_fit_csv(std::ostream& out, const ExperimentResult& result);

struct ExperimentFiles {
  std::filesystem::path series_csv;
  std::filesystem::path fits_txt;
  std::filesystem::path fits_csv;
};

/// Writes <label>.csv, <label>_fits.txt and <label>_fits.csv into dir.
ExperimentFiles write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

struct SweepPoint {
  ExperimentConfig config;
  std::optional<ExperimentResult> result;
  std::string error;  // empty on success
};

/// Runs every config (up to `workers` at a time), writes each point's files
/// into out_dir plus summary.txt / summary.csv.  A failing point is recorded
/// in the summary and does not stop the sweep.
std::vector<SweepPoint> run_sweep(const std::vector<ExperimentConfig>& grid, const std::filesystem::path& out_dir,
                                  int workers = 1);

void write_sweep_summary(std::ostream& out, const std::vector<SweepPoint>& points);
void write_sweep_summary_csv(std::ostream& out, const std::vector<SweepPoint>& points);

/// Grid file: blocks of key=value lines separated by lines holding `---`.
/// Each block, layered on `base`, is one point; points without a label get
/// point<index>.
std::vector<ExperimentConfig> parse_grid(std::string_view text, const ExperimentConfig& base = {});

/// Parameter sets of the three reference figures: "fig1", "fig2", "fig3".
std::vector<ExperimentConfig> preset(std::string_view name);

}  // namespace qkr
