#include "sharpal/config_io.hpp"

#include "sharpal/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

namespace sharpal {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(where + ": not a number: '" + text + "'");
  return value;
}

int parse_int(const std::string& text, const std::string& where) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(where + ": not an integer: '" + text + "'");
  return value;
}

ScheduleRule parse_rule(const std::string& text, const std::string& where) {
  try {
    return parse_schedule_rule(text);
  } catch (const NotFoundError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

template <typename T>
void take(std::optional<T>& mine, const std::optional<T>& theirs) {
  if (theirs) mine = theirs;
}

}  // namespace

void ConfigOverrides::merge(const ConfigOverrides& o) {
  take(lambda_min, o.lambda_min);
  take(lambda_max, o.lambda_max);
  take(tau, o.tau);
  take(gamma, o.gamma);
  take(tol, o.tol);
  take(r0, o.r0);
  take(t0, o.t0);
  take(max_outer, o.max_outer);
  take(r_max, o.r_max);
  take(eps_rule, o.eps_rule);
  take(s_rule, o.s_rule);
  take(cutoff_M, o.cutoff_M);
  take(s_floor, o.s_floor);
}

void ConfigOverrides::apply(SolverConfig& c) const {
  if (lambda_min) c.lambda_min = *lambda_min;
  if (lambda_max) c.lambda_max = *lambda_max;
  if (tau) c.tau = *tau;
  if (gamma) c.gamma = *gamma;
  if (tol) c.tol = *tol;
  if (r0) c.r0 = *r0;
  if (t0) c.t0 = *t0;
  if (max_outer) c.max_outer = *max_outer;
  if (r_max) c.r_max = *r_max;
  if (eps_rule) c.eps_rule = *eps_rule;
  if (s_rule) c.s_rule = *s_rule;
  if (s_floor) c.s_floor = *s_floor;
}

ConfigOverrides parse_config(std::istream& in, const std::string& source) {
  ConfigOverrides out;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = source + ":" + std::to_string(number);
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");

    if (key == "lambda_min") out.lambda_min = parse_double(value, where);
    else if (key == "lambda_max") out.lambda_max = parse_double(value, where);
    else if (key == "tau") out.tau = parse_double(value, where);
    else if (key == "gamma") out.gamma = parse_double(value, where);
    else if (key == "tol") out.tol = parse_double(value, where);
    else if (key == "r0") out.r0 = parse_double(value, where);
    else if (key == "t0") out.t0 = parse_double(value, where);
    else if (key == "max_outer") out.max_outer = parse_int(value, where);
    else if (key == "r_max") out.r_max = parse_double(value, where);
    else if (key == "eps_rule") out.eps_rule = parse_rule(value, where);
    else if (key == "s_rule") out.s_rule = parse_rule(value, where);
    else if (key == "cutoff_M") out.cutoff_M = parse_double(value, where);
    else if (key == "s_floor") out.s_floor = parse_double(value, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  return out;
}

ConfigOverrides load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace sharpal
