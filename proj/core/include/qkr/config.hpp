#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qkr {

enum class Mode { closed_form, dense, monte_carlo };
enum class SampleGrid { linear, log };

std::string_view to_string(Mode mode);
std::string_view to_string(SampleGrid grid);

/// One experiment: channel parameters, how to compute, where to sample.
///
/// Text form is one `key=value` per line, `#` starts a comment:
///
///   mode=dense          # closed-form | dense | monte-carlo
///   kappa1=0.1
///   kappa2=0.2
///   alpha=0.5
///   p=1
///   q=3
///   n_max=2000
///   grid=linear         # linear (stride = grid_density) | log (points per decade)
///   grid_density=1
struct ExperimentConfig {
  Mode mode = Mode::closed_form;
  double kappa1 = 1.0;
  double kappa2 = 2.0;
  double alpha = 0.5;
  long p = 1;
  long q = 1;
  long n_max = 1000;
  SampleGrid grid = SampleGrid::log;
  long grid_density = 64;
  double tail_tol = 1e-12;
  long window_cap = 20001;
  std::uint64_t seed = 1;
  long trajectories = 1000;
  /// Trailing samples used by the exponent fits; 0 picks the default rule.
  long fit_window = 0;
  std::string label = "run";
  /// Output directory; empty means the working directory.
  std::string output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Every recognised key, in rendering order.
const std::vector<std::string_view>& config_keys();

/// Sets one field from its text value.  Throws ConfigError for unknown keys
/// and malformed values; range checks happen in validate().
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Field name and message of the first violated constraint, if any.
struct ConfigIssue {
  std::string field;
  std::string message;
};
std::optional<ConfigIssue> find_issue(const ExperimentConfig& config);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Parses key=value text on top of `base`, then validates.  Errors carry the
/// line number of the offending entry.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base = {});

/// Like parse_config but without the final validation (for grid files).
ExperimentConfig parse_settings(std::string_view text, const ExperimentConfig& base, int first_line = 1);

/// Full key=value text; doubles carry 17 significant digits.
std::string render_config(const ExperimentConfig& config);

/// Kick counts at which observables are recorded, all in [1, n_max] and
/// always including n_max.
std::vector<long> sample_grid(const ExperimentConfig& config);

/// Shortest text that round-trips a double (17 significant digits).
std::string format_double(double v);

}  // namespace qkr
