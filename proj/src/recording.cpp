#include "erdkit/recording.hpp"

#include <set>
#include <string>

#include "erdkit/errors.hpp"

namespace erdkit {

std::size_t Recording::channel_index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw InputError("recording has no channel labeled " + label);
}

void Recording::validate() const {
  if (!(fs_hz > 0.0)) throw FormatError("sample rate must be positive");
  if (channels.empty() || channels[0].empty()) {
    throw FormatError("recording has no samples");
  }
  if (labels.size() != channels.size()) {
    throw FormatError("label count does not match channel count");
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw FormatError("duplicate channel label: " + l);
  }
  const std::size_t n = channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw FormatError("channels have unequal lengths");
  }
  std::int64_t last = -1;
  for (const auto& t : triggers) {
    if (t.sample_index < 0 || t.sample_index >= n_samples()) {
      throw FormatError("trigger at sample " + std::to_string(t.sample_index) +
                        " outside recording");
    }
    if (t.sample_index < last) {
      throw FormatError("triggers out of order at sample " +
                        std::to_string(t.sample_index));
    }
    last = t.sample_index;
  }
}

std::size_t TrialSet::n_valid() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.valid ? 1 : 0;
  return n;
}

namespace {

// The full span a trial's analysis may touch: one second of context before
// cue1 (the longest reference window) through the recovery window after
// movement end.
SampleRange trial_analysis_span(const Trial& t, const TrialTiming& timing,
                                double fs_hz) {
  const std::int64_t one_s = ms_to_samples(1000.0, fs_hz);
  const std::int64_t recovery = ms_to_samples(timing.recovery_ms, fs_hz);
  return {t.cue1 - one_s, t.movement_end + std::max(one_s, recovery)};
}

}  // namespace

TrialSet segment_trials(const Recording& recording, const TrialTiming& timing) {
  TrialSet set;
  const std::int64_t n = recording.n_samples();
  std::size_t i = 0;
  const auto& trig = recording.triggers;
  while (i < trig.size()) {
    if (trig[i].code != TriggerCode::TrialStart) {
      ++i;
      continue;
    }
    Trial t;
    t.trial_start = trig[i].sample_index;
    // A complete group is TrialStart, Cue1, Cue2, MovementEnd in order.
    bool complete = i + 3 < trig.size() &&
                    trig[i + 1].code == TriggerCode::Cue1 &&
                    trig[i + 2].code == TriggerCode::Cue2 &&
                    trig[i + 3].code == TriggerCode::MovementEnd;
    if (complete) {
      t.cue1 = trig[i + 1].sample_index;
      t.cue2 = trig[i + 2].sample_index;
      t.movement_end = trig[i + 3].sample_index;
      const bool ordered =
          t.trial_start < t.cue1 && t.cue1 < t.cue2 && t.cue2 <= t.movement_end;
      const SampleRange span = trial_analysis_span(t, timing, recording.fs_hz);
      const std::int64_t r1_end =
          ms_to_samples(timing.r1_anchor_ms, recording.fs_hz) +
          ms_to_samples(1000.0, recording.fs_hz);
      t.valid = ordered && span.begin >= 0 && span.end <= n && r1_end <= n;
      set.trials.push_back(t);
      i += 4;
    } else {
      // Truncated or disordered group: keep a placeholder so the exclusion
      // is visible, but mark it invalid.
      t.cue1 = t.trial_start + 1;
      t.cue2 = t.trial_start + 2;
      t.movement_end = t.trial_start + 3;
      t.valid = false;
      set.trials.push_back(t);
      ++i;
    }
  }
  return set;
}

SampleRange period_bounds(const Trial& trial, PeriodKind period,
                          const TrialTiming& timing, double fs_hz,
                          std::int64_t recording_length) {
  internal_check(trial.trial_start < trial.cue1 && trial.cue1 < trial.cue2 &&
                     trial.cue2 <= trial.movement_end,
                 "trial landmarks out of order");
  const std::int64_t one_s = ms_to_samples(1000.0, fs_hz);
  const std::int64_t half_s = ms_to_samples(timing.post_trigger_ms / 3.0, fs_hz);
  const std::int64_t reaction = ms_to_samples(timing.reaction_ms, fs_hz);
  const std::int64_t r1 = ms_to_samples(timing.r1_anchor_ms, fs_hz);

  SampleRange r;
  switch (period) {
    case PeriodKind::R1:
      r = {r1, r1 + one_s};
      break;
    case PeriodKind::R2:
      r = {trial.cue1 - one_s, trial.cue1};
      break;
    case PeriodKind::A1:
      r = {trial.cue1, trial.cue1 + one_s};
      break;
    case PeriodKind::A2:
      r = {trial.cue2 + reaction, trial.cue2 + reaction + one_s};
      break;
    case PeriodKind::A3:
      r = {trial.movement_end, trial.movement_end + one_s};
      break;
    case PeriodKind::PreTrigger:
      r = {trial.cue1 - half_s, trial.cue1};
      break;
    case PeriodKind::Post1:
      r = {trial.cue1, trial.cue1 + half_s};
      break;
    case PeriodKind::Post2:
      r = {trial.cue1 + half_s, trial.cue1 + 2 * half_s};
      break;
    case PeriodKind::Post3:
      r = {trial.cue1 + 2 * half_s, trial.cue1 + 3 * half_s};
      break;
    case PeriodKind::ReactionTime:
      r = {trial.cue2, trial.cue2 + reaction};
      break;
  }
  if (r.begin < 0 || r.end > recording_length) {
    throw InputError("analysis window for period " + to_string(period) +
                     " exceeds the recording (truncated trial)");
  }
  return r;
}

std::vector<SampleRange> analysis_windows(const Trial& trial,
                                          bool standard_family,
                                          const TrialTiming& timing,
                                          double fs_hz,
                                          std::int64_t recording_length) {
  static const PeriodKind standard[] = {PeriodKind::R1, PeriodKind::R2,
                                        PeriodKind::A1, PeriodKind::A2,
                                        PeriodKind::A3};
  static const PeriodKind streaming[] = {
      PeriodKind::PreTrigger, PeriodKind::Post1, PeriodKind::Post2,
      PeriodKind::Post3, PeriodKind::ReactionTime};
  std::vector<SampleRange> out;
  for (PeriodKind k : standard_family ? standard : streaming) {
    out.push_back(period_bounds(trial, k, timing, fs_hz, recording_length));
  }
  return out;
}

}  // namespace erdkit
