#include "erdkit/timing.hpp"

#include <cmath>

namespace erdkit {

void TrialTiming::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("timing.") + name + " must be positive");
  };
  positive(pre_trigger_ms, "pre_trigger_ms");
  positive(post_trigger_ms, "post_trigger_ms");
  positive(reaction_ms, "reaction_ms");
  positive(movement_min_ms, "movement_min_ms");
  positive(movement_max_ms, "movement_max_ms");
  positive(recovery_ms, "recovery_ms");
  if (!(movement_min_ms < movement_max_ms)) {
    throw ConfigError("timing.movement_min_ms must be below movement_max_ms");
  }
  if (r1_anchor_ms < 0.0) {
    throw ConfigError("timing.r1_anchor_ms must be nonnegative");
  }
  const double third = post_trigger_ms / 3.0;
  if (std::abs(third - std::round(third)) > 1e-9) {
    throw ConfigError(
        "timing.post_trigger_ms must divide into three equal whole-ms intervals");
  }
}

std::int64_t ms_to_samples(double ms, double fs_hz) {
  return static_cast<std::int64_t>(std::floor(ms * fs_hz / 1000.0 + 0.5));
}

double samples_to_ms(std::int64_t samples, double fs_hz) {
  return static_cast<double>(samples) * 1000.0 / fs_hz;
}

bool is_valid_trigger_code(int code) { return code >= 1 && code <= 4; }

std::string to_string(TriggerCode code) {
  switch (code) {
    case TriggerCode::TrialStart: return "TrialStart";
    case TriggerCode::Cue1: return "Cue1";
    case TriggerCode::Cue2: return "Cue2";
    case TriggerCode::MovementEnd: return "MovementEnd";
  }
  return "?";
}

bool is_standard_period(PeriodKind kind) {
  switch (kind) {
    case PeriodKind::R1:
    case PeriodKind::R2:
    case PeriodKind::A1:
    case PeriodKind::A2:
    case PeriodKind::A3:
      return true;
    default:
      return false;
  }
}

std::string to_string(PeriodKind kind) {
  switch (kind) {
    case PeriodKind::R1: return "R1";
    case PeriodKind::R2: return "R2";
    case PeriodKind::A1: return "A1";
    case PeriodKind::A2: return "A2";
    case PeriodKind::A3: return "A3";
    case PeriodKind::PreTrigger: return "Pre";
    case PeriodKind::Post1: return "Post1";
    case PeriodKind::Post2: return "Post2";
    case PeriodKind::Post3: return "Post3";
    case PeriodKind::ReactionTime: return "Reaction";
  }
  return "?";
}

}  // namespace erdkit
