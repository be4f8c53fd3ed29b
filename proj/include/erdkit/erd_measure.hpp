#pragma once

#include "erdkit/errors.hpp"

namespace erdkit {

// Relative band-energy change between an active and a reference window.
// Two equivalent views: percent ((A-R)/R*100, negative = desynchronization)
// and ratio (A/R = 1 + percent/100). The measure stores whichever view
// constructed it and derives the other once, so each factory round-trips its
// own view exactly and the identity ratio == 1 + percent/100 always holds
// bit-for-bit (deriving one view from the other twice would not).
class ErdMeasure {
 public:
  static ErdMeasure from_percent(double percent) {
    internal_check(percent >= -100.0, "ERD percent below -100");
    return ErdMeasure(percent, 1.0 + percent / 100.0);
  }
  static ErdMeasure from_ratio(double ratio) {
    internal_check(ratio >= 0.0, "ERD ratio negative");
    return ErdMeasure((ratio - 1.0) * 100.0, ratio);
  }

  double percent() const { return percent_; }
  double ratio() const { return ratio_; }

  // Strict comparison: an ERD at least threshold_percent deep. A 40% threshold
  // is the ratio-below-0.60 rule; 20% is the laxer variant.
  bool identified(double threshold_percent) const {
    return percent_ < -threshold_percent;
  }

 private:
  ErdMeasure(double percent, double ratio) : percent_(percent), ratio_(ratio) {}
  double percent_;
  double ratio_;
};

// (active - reference)/reference * 100. reference_power must be positive;
// zero reference throws DegenerateReferenceError (dead or suppressed window).
// Multiplying by 100 before the division keeps round-number boundary cases
// (60, 100 -> exactly -40) free of intermediate rounding.
inline ErdMeasure erd_percent(double active_power, double reference_power) {
  if (!(reference_power > 0.0)) {
    throw DegenerateReferenceError("reference window power must be positive");
  }
  if (!(active_power >= 0.0)) {
    throw InputError("active window power must be nonnegative");
  }
  return ErdMeasure::from_percent((active_power - reference_power) * 100.0 /
                                  reference_power);
}

}  // namespace erdkit
