#include "sharpal/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace sharpal {

namespace {

constexpr double kRelativeNoise = 1e-13;
constexpr double kApproxDelta = 0.1;

struct Trial {
  double step = 0.0;
  bool finite = false;
  double value = 0.0;
  double slope = 0.0;  // phi'(step)
  Vector point;
  Vector gradient;
};

class Searcher {
 public:
  Searcher(const SmoothObjective& objective, const Vector& z, double value,
           const Vector& gradient, const Vector& direction, const LineSearchParams& params)
      : objective_(objective), z_(z), d_(direction), params_(params) {
    origin_.step = 0.0;
    origin_.finite = true;
    origin_.value = value;
    origin_.slope = gradient.dot(direction);
    origin_.point = z;
    origin_.gradient = gradient;
    noise_ = kRelativeNoise * std::max(1.0, std::abs(value));
  }

  LineSearchResult run(double initial_step, double max_step) {
    Trial prev = origin_;
    double step = std::min(initial_step, max_step);
    bool first = true;
    while (evaluations_ < params_.max_evaluations) {
      Trial cur = evaluate(step);
      if (!cur.finite || too_high(cur) || (!first && cur.value > prev.value + noise_)) {
        return zoom(std::move(prev), std::move(cur));
      }
      if (const auto kind = acceptable(cur)) return finish(*kind, cur);
      if (cur.slope >= 0.0) return zoom(std::move(cur), std::move(prev));
      if (step >= max_step) return finish(LineSearchOutcome::sufficient_decrease, cur);
      first = false;
      prev = std::move(cur);
      step = std::min(4.0 * step, max_step);
    }
    return finish(LineSearchOutcome::failed, origin_);
  }

 private:
  Trial evaluate(double step) {
    ++evaluations_;
    Trial t;
    t.step = step;
    t.point = z_ + step * d_;
    const auto vg = objective_(t.point);
    if (vg && std::isfinite(vg->value) && vg->gradient.allFinite()) {
      t.finite = true;
      t.value = vg->value;
      t.gradient = vg->gradient;
      t.slope = t.gradient.dot(d_);
    } else {
      saw_non_finite_ = saw_non_finite_ || vg.has_value();
    }
    return t;
  }

  bool violates_armijo(const Trial& t) const {
    return t.value > origin_.value + params_.c1 * t.step * origin_.slope;
  }

  // Armijo fails and the value is not within rounding of phi(0) either.
  bool too_high(const Trial& t) const {
    return violates_armijo(t) && t.value > origin_.value + noise_;
  }

  bool satisfies_curvature(const Trial& t) const {
    return std::abs(t.slope) <= -params_.c2 * origin_.slope;
  }

  // Strong Wolfe, or the approximate Wolfe test of Hager and Zhang for steps
  // whose value change is below rounding level.
  std::optional<LineSearchOutcome> acceptable(const Trial& t) const {
    if (!violates_armijo(t) && satisfies_curvature(t)) return LineSearchOutcome::strong_wolfe;
    if (t.value <= origin_.value + noise_ && t.slope >= params_.c2 * origin_.slope &&
        t.slope <= (2.0 * kApproxDelta - 1.0) * origin_.slope) {
      return LineSearchOutcome::approximate_wolfe;
    }
    return std::nullopt;
  }

  // lo satisfies Armijo and has the lowest value seen so far; the interval
  // between lo and hi contains a strong Wolfe step.
  LineSearchResult zoom(Trial lo, Trial hi) {
    while (evaluations_ < params_.max_evaluations) {
      const double width = std::abs(hi.step - lo.step);
      if (width <= 1e-16 * std::max(1.0, std::abs(lo.step))) break;
      const double step = next_trial(lo, hi);
      Trial cur = evaluate(step);
      if (!cur.finite || too_high(cur) || cur.value > lo.value + noise_ ||
          (cur.value >= lo.value && cur.value > origin_.value + noise_)) {
        hi = std::move(cur);
        continue;
      }
      if (const auto kind = acceptable(cur)) return finish(*kind, cur);
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = std::move(lo);
      lo = std::move(cur);
    }
    if (lo.step > 0.0 && (lo.value < origin_.value || acceptable(lo))) {
      return finish(LineSearchOutcome::sufficient_decrease, lo);
    }
    return finish(LineSearchOutcome::failed, origin_);
  }

  double next_trial(const Trial& lo, const Trial& hi) const {
    const double a = lo.step;
    const double b = hi.step;
    const double lower = std::min(a, b) + 0.1 * std::abs(b - a);
    const double upper = std::max(a, b) - 0.1 * std::abs(b - a);
    const double mid = 0.5 * (a + b);
    if (!hi.finite) return mid;
    if (std::abs(lo.value - hi.value) <= noise_) {
      // Values carry no information; secant on the slopes.
      if (lo.slope * hi.slope < 0.0) {
        return std::clamp(a - lo.slope * (b - a) / (hi.slope - lo.slope), lower, upper);
      }
      return mid;
    }
    // Minimizer of the cubic matching values and slopes at both ends.
    const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
    const double disc = d1 * d1 - lo.slope * hi.slope;
    if (!(disc >= 0.0)) return mid;
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = hi.slope - lo.slope + 2.0 * d2;
    if (denom == 0.0) return mid;
    const double step = b - (b - a) * (hi.slope + d2 - d1) / denom;
    if (!std::isfinite(step)) return mid;
    return std::clamp(step, lower, upper);
  }

  LineSearchResult finish(LineSearchOutcome outcome, const Trial& t) const {
    LineSearchResult r;
    r.outcome = outcome;
    r.step = t.step;
    r.point = t.point;
    r.value = t.value;
    r.gradient = t.gradient;
    r.evaluations = evaluations_;
    r.saw_non_finite = saw_non_finite_;
    return r;
  }

  const SmoothObjective& objective_;
  const Vector& z_;
  const Vector& d_;
  const LineSearchParams& params_;
  Trial origin_;
  double noise_ = 0.0;
  int evaluations_ = 0;
  bool saw_non_finite_ = false;
};

}  // namespace

LineSearchResult strong_wolfe_search(const SmoothObjective& objective, const Vector& z,
                                     double value, const Vector& gradient,
                                     const Vector& direction, double initial_step,
                                     double max_step, const LineSearchParams& params) {
  Searcher searcher(objective, z, value, gradient, direction, params);
  return searcher.run(initial_step, max_step);
}

}  // namespace sharpal
