#include "sharpal/schedule.hpp"

#include "sharpal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sharpal {

ScheduleRule parse_schedule_rule(const std::string& name) {
  if (name == "adaptive") return ScheduleRule::adaptive;
  if (name == "geometric") return ScheduleRule::geometric;
  throw NotFoundError("unknown schedule rule '" + name + "' (expected adaptive|geometric)");
}

const char* to_string(ScheduleRule rule) {
  return rule == ScheduleRule::adaptive ? "adaptive" : "geometric";
}

ScheduleStep schedule_rule(int k, double h_norm, double tol, ScheduleRule eps_rule,
                           ScheduleRule s_rule, double s_floor) {
  if (k < 0) throw std::invalid_argument("schedule: k must be >= 0");
  if (!(h_norm >= 0.0)) throw std::invalid_argument("schedule: h_norm must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("schedule: tol must be > 0");
  if (!(s_floor > 0.0)) throw std::invalid_argument("schedule: s_floor must be > 0");
  const double geometric = std::pow(10.0, -1.0 - k);

  ScheduleStep step;
  double eps = geometric;
  if (eps_rule == ScheduleRule::adaptive) eps = std::min(eps, std::pow(h_norm, 1.5));
  step.eps = std::max(tol / 10.0, eps);

  double s = geometric;
  if (s_rule == ScheduleRule::adaptive) s = std::min(s, 0.1 * h_norm);
  step.s = std::max(s_floor, s);
  return step;
}

Schedule::Schedule(double tol, ScheduleRule eps_rule, ScheduleRule s_rule, double s_floor)
    : tol_(tol),
      eps_rule_(eps_rule),
      s_rule_(s_rule),
      s_floor_(s_floor),
      last_eps_(std::numeric_limits<double>::infinity()) {}

ScheduleStep Schedule::next(int k, double h_norm) {
  ScheduleStep step = schedule_rule(k, h_norm, tol_, eps_rule_, s_rule_, s_floor_);
  step.eps = std::min(step.eps, last_eps_);
  last_eps_ = step.eps;
  return step;
}

}  // namespace sharpal
