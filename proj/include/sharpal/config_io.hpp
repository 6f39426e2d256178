#pragma once

#include "sharpal/outer.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>

namespace sharpal {

/// Settings read from a key=value file. Only keys present in the file are set.
struct ConfigOverrides {
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  std::optional<double> tau;
  std::optional<double> gamma;
  std::optional<double> tol;
  std::optional<double> r0;
  std::optional<double> t0;
  std::optional<int> max_outer;
  std::optional<double> r_max;
  std::optional<ScheduleRule> eps_rule;
  std::optional<ScheduleRule> s_rule;
  std::optional<double> cutoff_M;
  std::optional<double> s_floor;

  /// Fields set in `other` replace ours.
  void merge(const ConfigOverrides& other);
  void apply(SolverConfig& config) const;
};

/// Error raised for malformed lines, unknown keys or bad values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Blank lines and lines starting with '#' are ignored. Whitespace around
/// keys and values is trimmed.
ConfigOverrides parse_config(std::istream& in, const std::string& source = "<stream>");
ConfigOverrides load_config_file(const std::string& path);

}  // namespace sharpal
