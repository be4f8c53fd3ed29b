#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "erdkit/config.hpp"
#include "erdkit/dsp.hpp"
#include "erdkit/erd_measure.hpp"
#include "erdkit/recording.hpp"

namespace erdkit {

// Streaming pipeline: nearby-electrode differences, an overlapping 2 Hz band
// bank, causal filtering, consecutive 500 ms interval energies and their
// ratios, group-mean identification at the 0.60 ratio threshold.

struct DifferentialChannel {
  DifferentialPair pair;
  std::vector<double> samples;  // pos - neg, sample-wise
};

// Sample-wise differences for every configured pair. Validates labels and
// (strict mode) grid adjacency. Throws ConfigError.
std::vector<DifferentialChannel> build_differentials(
    const Recording& recording, const std::vector<DifferentialPair>& pairs,
    const Montage& montage, bool strict);

// The four consecutive-interval transitions, in decision order. Rows are
// labeled by when the decision is available relative to movement onset:
// post1/pre -> "-1.5 s", post2/post1 -> "-1 s", post3/post2 -> "-0.5 s",
// reaction/post3 -> "onset".
constexpr int kNumTransitions = 4;
std::array<std::string, kNumTransitions> transition_labels();

struct TransitionRatios {
  // ratio[t] = energy(interval t+1) / energy(interval t) over the sequence
  // PreTrigger, Post1, Post2, Post3, ReactionTime. Degenerate denominators
  // (zero energy) leave the entry unset.
  std::array<std::optional<double>, kNumTransitions> ratio;
};

struct RatioProfile {
  // [differential][band] -> four consecutive ratios for one trial.
  std::vector<std::vector<TransitionRatios>> per_channel_band;
  std::array<std::int64_t, 5> interval_energy_macs{};  // bench bookkeeping
};

// Causal band-pass per differential x band and interval energies under the
// online contract: interval [a,b) is measured on filtered samples
// [a+gd, b+gd), so each ratio uses only input up to the interval end plus the
// filter group delay. The filter is warmed up from max(0, pre_begin - L)
// so the pre-trigger window is past the stream-start transient.
RatioProfile ratio_profile(const Trial& trial,
                           const std::vector<DifferentialChannel>& differentials,
                           const std::vector<FrequencyBand>& bank,
                           const std::vector<BandpassFilter>& filters,
                           const TrialTiming& timing, double fs_hz,
                           std::int64_t recording_length);

struct GroupDecision {
  std::optional<double> mean_ratio;  // unset when every member is degenerate
  bool identified = false;           // mean_ratio < threshold_ratio, strict
  double mean_erd_percent = 0.0;     // (mean_ratio - 1) * 100 when set
};

// Group means of one transition's ratios across a band. groups follow
// PairGroup order {LeftSide, InterHemisphere, RightSide}.
struct TrialGroupDecisions {
  // [band][transition][group]
  std::vector<std::array<std::array<GroupDecision, 3>, kNumTransitions>> decisions;
};

TrialGroupDecisions group_identify(const RatioProfile& profile,
                                   const std::vector<DifferentialPair>& pairs,
                                   std::size_t n_bands, double threshold_ratio);

struct NovelCell {
  int transition = 0;   // 0..3
  PairGroup group = PairGroup::LeftSide;
  double identification_pct = 0.0;
  std::optional<double> mean_identified;  // ERD% over identified trials
  std::optional<double> std_identified;
  std::int64_t n_evaluable_trials = 0;
};

struct NovelRunResult {
  std::vector<FrequencyBand> bank;
  std::size_t reporting_band_index = 0;
  // cells[band][transition*3 + group]
  std::vector<std::vector<NovelCell>> cells;
  std::int64_t n_trials_analyzed = 0;
  std::int64_t n_trials_total = 0;
  std::int64_t n_excluded_artifact = 0;
  double filter_group_delay_ms = 0.0;
  // Per analyzed trial (parallel vectors): the first transition's group
  // decisions at the reporting band, for trial-level comparisons.
  std::vector<std::int64_t> analyzed_trial_indices;
  std::vector<std::array<GroupDecision, 3>> reporting_first_transition;
};

// Full streaming pipeline over a trial set: artifact suppression per
// electrode, per-method validity, differentials, band bank, per-trial
// profiles and group decisions, aggregated per band x transition x group.
NovelRunResult run_novel(const Recording& recording, const TrialSet& trials,
                         const AnalysisConfig& config);

}  // namespace erdkit
