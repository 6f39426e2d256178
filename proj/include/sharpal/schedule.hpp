#pragma once

#include <string>

namespace sharpal {

/// How the inner tolerance eps_k and barrier parameter s_k are chosen.
///   adaptive  : tied to the current infeasibility (default)
///               eps_k = max(tol/10, min(10^(-1-k), ||h||^(3/2)))
///               s_k   = max(s_floor, min(10^(-1-k), 0.1 ||h||))
///   geometric : eps_k = max(tol/10, 10^(-1-k)),  s_k = max(s_floor, 10^(-1-k))
enum class ScheduleRule { adaptive, geometric };

ScheduleRule parse_schedule_rule(const std::string& name);
const char* to_string(ScheduleRule rule);

struct ScheduleStep {
  double eps = 0.0;
  double s = 0.0;
};

inline constexpr double kBarrierFloor = 1e-3;

/// Stateless rule for (eps_k, s_k) at outer iteration k.
ScheduleStep schedule_rule(int k, double h_norm, double tol, ScheduleRule eps_rule,
                           ScheduleRule s_rule, double s_floor = kBarrierFloor);

/// Schedule with memory: eps_k is additionally capped by the previous value so
/// the sequence never increases, even when ||h|| grows between iterations.
class Schedule {
 public:
  Schedule(double tol, ScheduleRule eps_rule, ScheduleRule s_rule,
           double s_floor = kBarrierFloor);

  ScheduleStep next(int k, double h_norm);

 private:
  double tol_;
  ScheduleRule eps_rule_;
  ScheduleRule s_rule_;
  double s_floor_;
  double last_eps_;
};

}  // namespace sharpal
