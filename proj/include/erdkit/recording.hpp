#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erdkit/montage.hpp"
#include "erdkit/timing.hpp"

namespace erdkit {

struct Trigger {
  std::int64_t sample_index = 0;
  TriggerCode code = TriggerCode::TrialStart;
};

// Multichannel EEG record: equal-length per-electrode sample sequences in
// microvolts plus a sparse trigger list.
struct Recording {
  double fs_hz = 512.0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> channels;  // [channel][sample]
  std::vector<Trigger> triggers;

  std::int64_t n_samples() const {
    return channels.empty() ? 0 : static_cast<std::int64_t>(channels[0].size());
  }
  std::size_t channel_index(const std::string& label) const;

  // Checks fs > 0, non-empty equal-length channels, labels match channel
  // count and are unique, triggers in-range and non-decreasing.
  // Throws FormatError.
  void validate() const;
};

// One trial's landmarks as absolute sample offsets into the recording.
struct Trial {
  std::int64_t trial_start = 0;
  std::int64_t cue1 = 0;
  std::int64_t cue2 = 0;
  std::int64_t movement_end = 0;
  // False when any analysis window would run off the recording.
  bool valid = true;
  // Suppressed spans that overlapped this trial (filled by analysis).
  std::vector<SampleRange> artifact_spans;
};

struct TrialSet {
  std::vector<Trial> trials;

  std::size_t n_valid() const;
};

// Groups TrialStart..MovementEnd trigger runs into trials. Incomplete or
// mis-ordered groups and trials whose full analysis span (including the
// second's worth of context before cue1 and the recovery window after
// movement end) runs off the recording are marked invalid, not dropped.
// Zero triggers yield an empty set.
TrialSet segment_trials(const Recording& recording, const TrialTiming& timing);

// Half-open sample window for one analysis period of one trial.
// Standard periods are 1 s long, streaming periods 500 ms (post_trigger/3).
// R1 is anchored at timing.r1_anchor_ms into the recording, independent of
// the trial. Throws InputError when the range exceeds the recording length
// (truncated trial), std::logic_error on landmark disorder.
SampleRange period_bounds(const Trial& trial, PeriodKind period,
                          const TrialTiming& timing, double fs_hz,
                          std::int64_t recording_length);

// All windows a method reads for one trial (used for artifact-overlap
// validity checks). standard_family=true -> R1,R2,A1,A2,A3; false ->
// PreTrigger..ReactionTime.
std::vector<SampleRange> analysis_windows(const Trial& trial,
                                          bool standard_family,
                                          const TrialTiming& timing,
                                          double fs_hz,
                                          std::int64_t recording_length);

}  // namespace erdkit
