#include "qkr/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "qkr/errors.hpp"

namespace qkr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

Mode parse_mode(std::string_view text) {
  if (text == "closed-form") return Mode::closed_form;
  if (text == "dense") return Mode::dense;
  if (text == "monte-carlo") return Mode::monte_carlo;
  throw ConfigError("mode: expected closed-form, dense or monte-carlo, got '" + std::string(text) + "'");
}

SampleGrid parse_grid(std::string_view text) {
  if (text == "linear") return SampleGrid::linear;
  if (text == "log") return SampleGrid::log;
  throw ConfigError("grid: expected linear or log, got '" + std::string(text) + "'");
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::map<std::string_view, Field>& fields() {
  static const std::map<std::string_view, Field> table = [] {
    std::map<std::string_view, Field> t;
    auto real = [&t](std::string_view key, double ExperimentConfig::*member) {
      t[key] = Field{[key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_double(key, v); },
                     [member](const ExperimentConfig& c) { return format_double(c.*member); }};
    };
    auto integer = [&t](std::string_view key, long ExperimentConfig::*member) {
      t[key] = Field{[key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_int<long>(key, v); },
                     [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
    };
    t["mode"] = Field{[](ExperimentConfig& c, std::string_view v) { c.mode = parse_mode(v); },
                      [](const ExperimentConfig& c) { return std::string(to_string(c.mode)); }};
    real("kappa1", &ExperimentConfig::kappa1);
    real("kappa2", &ExperimentConfig::kappa2);
    real("alpha", &ExperimentConfig::alpha);
    integer("p", &ExperimentConfig::p);
    integer("q", &ExperimentConfig::q);
    integer("n_max", &ExperimentConfig::n_max);
    t["grid"] = Field{[](ExperimentConfig& c, std::string_view v) { c.grid = parse_grid(v); },
                      [](const ExperimentConfig& c) { return std::string(to_string(c.grid)); }};
    integer("grid_density", &ExperimentConfig::grid_density);
    real("tail_tol", &ExperimentConfig::tail_tol);
    integer("window_cap", &ExperimentConfig::window_cap);
    t["seed"] = Field{[](ExperimentConfig& c, std::string_view v) { c.seed = parse_int<std::uint64_t>("seed", v); },
                      [](const ExperimentConfig& c) { return std::to_string(c.seed); }};
    integer("trajectories", &ExperimentConfig::trajectories);
    integer("fit_window", &ExperimentConfig::fit_window);
    t["label"] = Field{[](ExperimentConfig& c, std::string_view v) { c.label = std::string(v); },
                       [](const ExperimentConfig& c) { return c.label; }};
    t["output"] = Field{[](ExperimentConfig& c, std::string_view v) { c.output = std::string(v); },
                        [](const ExperimentConfig& c) { return c.output; }};
    return t;
  }();
  return table;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::closed_form: return "closed-form";
    case Mode::dense: return "dense";
    case Mode::monte_carlo: return "monte-carlo";
  }
  return "?";
}

std::string_view to_string(SampleGrid grid) {
  return grid == SampleGrid::linear ? "linear" : "log";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "mode", "kappa1",     "kappa2", "alpha", "p",            "q",          "n_max", "grid", "grid_density",
      "tail_tol", "window_cap", "seed",   "trajectories", "fit_window", "label", "output"};
  return keys;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const auto& table = fields();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  it->second.set(config, trim(value));
}

std::optional<ConfigIssue> find_issue(const ExperimentConfig& c) {
  if (!std::isfinite(c.kappa1)) return ConfigIssue{"kappa1", "kappa1 must be finite"};
  if (!std::isfinite(c.kappa2)) return ConfigIssue{"kappa2", "kappa2 must be finite"};
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
    return ConfigIssue{"alpha", "alpha must lie in [0, 1], got " + format_double(c.alpha)};
  }
  if (c.p < 1) return ConfigIssue{"p", "p must be >= 1"};
  if (c.q < 1) return ConfigIssue{"q", "q must be >= 1"};
  if (std::gcd(c.p, c.q) != 1) return ConfigIssue{"q", "p/q must be in lowest terms"};
  if (c.mode == Mode::closed_form && c.q != 1) {
    return ConfigIssue{"mode", "closed-form mode requires q = 1 (commuting kick operators), got q = " +
                                   std::to_string(c.q)};
  }
  if (c.n_max < 1 || c.n_max > 100000000) return ConfigIssue{"n_max", "n_max must lie in [1, 1e8]"};
  if (c.grid_density < 1) return ConfigIssue{"grid_density", "grid_density must be >= 1"};
  if (!(c.tail_tol > 0.0 && c.tail_tol < 1.0)) return ConfigIssue{"tail_tol", "tail_tol must lie in (0, 1)"};
  if (c.window_cap < 3) return ConfigIssue{"window_cap", "window_cap must be >= 3"};
  if (c.trajectories < 2) return ConfigIssue{"trajectories", "trajectories must be >= 2"};
  if (c.fit_window < 0) return ConfigIssue{"fit_window", "fit_window must be >= 0"};
  if (c.label.empty() || c.label.find_first_of("/\\") != std::string::npos) {
    return ConfigIssue{"label", "label must be a non-empty file-name stem"};
  }
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (const auto issue = find_issue(config)) throw ConfigError(issue->field + ": " + issue->message);
}

ExperimentConfig parse_settings(std::string_view text, const ExperimentConfig& base, int first_line) {
  ExperimentConfig config = base;
  int line_no = first_line - 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    try {
      apply_setting(config, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return config;
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig& base) {
  ExperimentConfig config = parse_settings(text, base, 1);
  if (const auto issue = find_issue(config)) {
    // Point at the last line that set the offending field, when there is one.
    int where = 0;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      if (trim(std::string_view(line).substr(0, eq)) == issue->field) where = line_no;
    }
    const std::string prefix = where > 0 ? "line " + std::to_string(where) + ": " : "";
    throw ConfigError(prefix + issue->field + ": " + issue->message);
  }
  return config;
}

std::string render_config(const ExperimentConfig& config) {
  std::string out;
  const auto& table = fields();
  for (const auto key : config_keys()) {
    out += key;
    out += '=';
    out += table.at(key).get(config);
    out += '\n';
  }
  return out;
}

std::vector<long> sample_grid(const ExperimentConfig& config) {
  std::vector<long> out;
  if (config.grid == SampleGrid::linear) {
    for (long n = config.grid_density; n <= config.n_max; n += config.grid_density) out.push_back(n);
  } else {
    const double decades = std::log10(static_cast<double>(config.n_max));
    const auto steps = static_cast<long>(std::floor(decades * static_cast<double>(config.grid_density) + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      const auto n = std::lround(std::pow(10.0, static_cast<double>(k) / static_cast<double>(config.grid_density)));
      if (n >= 1 && n <= config.n_max && (out.empty() || n > out.back())) out.push_back(n);
    }
  }
  if (out.empty() || out.back() != config.n_max) out.push_back(config.n_max);
  return out;
}

}  // namespace qkr
