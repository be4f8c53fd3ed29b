#pragma once

#include <cstdint>
#include <string>

#include "erdkit/errors.hpp"

namespace erdkit {

// Trial phase durations in milliseconds. Samples are derived at the last
// moment by half-up rounding; at 512 Hz the defaults are exact.
struct TrialTiming {
  double pre_trigger_ms = 500.0;    // rest before the first cue
  double post_trigger_ms = 1500.0;  // wait between first and second cue
  double reaction_ms = 500.0;       // nominal reaction time after the second cue
  double movement_min_ms = 500.0;
  double movement_max_ms = 740.0;
  double recovery_ms = 1000.0;      // rest after movement end (config value)
  double r1_anchor_ms = 500.0;      // baseline-window offset into the recording

  // Throws ConfigError if any duration is non-positive, movement_min >=
  // movement_max, or post_trigger is not divisible into three equal
  // sub-intervals of whole milliseconds.
  void validate() const;
};

// Half-up rounding of a millisecond duration to samples.
std::int64_t ms_to_samples(double ms, double fs_hz);
double samples_to_ms(std::int64_t samples, double fs_hz);

enum class TriggerCode : int {
  TrialStart = 1,
  Cue1 = 2,
  Cue2 = 3,
  MovementEnd = 4,
};

bool is_valid_trigger_code(int code);
std::string to_string(TriggerCode code);

// Analysis windows. The standard method uses five one-second periods:
// R1 (baseline rest), R2 (the second ending at cue1), A1 (from cue1),
// A2 (from movement onset = cue2 + reaction), A3 (from movement end).
// The streaming method uses five 500 ms intervals: PreTrigger (ending at
// cue1), Post1/Post2/Post3 (tiling the post-trigger window) and ReactionTime
// (from cue2).
enum class PeriodKind {
  R1, R2, A1, A2, A3,
  PreTrigger, Post1, Post2, Post3, ReactionTime,
};

bool is_standard_period(PeriodKind kind);
std::string to_string(PeriodKind kind);

struct SampleRange {
  std::int64_t begin = 0;  // inclusive
  std::int64_t end = 0;    // exclusive

  std::int64_t length() const { return end - begin; }
  bool overlaps(const SampleRange& o) const {
    return begin < o.end && o.begin < end;
  }
  bool operator==(const SampleRange& o) const = default;
};

}  // namespace erdkit
