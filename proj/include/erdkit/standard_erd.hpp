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

// Offline pipeline: per (reference, active) period pair and channel, select
// the subject-specific 2 Hz band from mean log spectra, band-pass (zero
// phase), square, and compare mean window powers.

struct PeriodPair {
  PeriodKind reference = PeriodKind::R2;  // R1 or R2
  PeriodKind active = PeriodKind::A1;     // A1, A2 or A3

  std::string name() const;  // "R2A1"
};

// All six pairs in report order: R1A1, R1A2, R1A3, R2A1, R2A2, R2A3.
std::array<PeriodPair, 6> all_period_pairs();

struct IndividualBand {
  FrequencyBand band;                 // 2 Hz wide
  double center_hz = 0.0;             // the reported "individual frequency"
  double mean_difference = 0.0;       // selection score (log units)
  std::vector<double> bin_difference; // diagnostics over the searched grid
  std::vector<double> bin_bound;      // 95% confidence bound per bin
  std::vector<double> bin_frequency_hz;
  bool fallback = false;              // true when config default band was used
};

// Sliding 2 Hz window over the Welch grid restricted to the configured band
// range: keeps windows where every bin's (reference - active) mean log
// difference is positive and exceeds its 95% bound, picks the one with the
// greatest mean difference; its center frequency is the individual frequency.
// Throws InsufficientDataError (< min_trials windows per set) or
// NoReactiveBandError (nothing passes).
IndividualBand select_individual_band(
    const std::vector<std::vector<double>>& reference_windows,
    const std::vector<std::vector<double>>& active_windows, double fs_hz,
    const AnalysisConfig& config);

struct PairChannelResult {
  PeriodPair pair;
  std::string channel;
  IndividualBand band;
  std::vector<ErdMeasure> per_trial;       // valid, non-degenerate trials
  std::vector<std::int64_t> trial_indices; // parallel to per_trial
  double identification_pct = 0.0;         // over valid trials, strict rule
  std::optional<double> mean_identified;   // ERD% stats over identified trials
  std::optional<double> std_identified;
  std::int64_t n_valid_trials = 0;
  std::int64_t n_excluded_zero_reference = 0;
  // Secondary aggregate: ERD% of the power trace averaged across trials.
  std::optional<double> average_trial_erd_percent;
};

// Per-trial ERD for one pair/channel at a given band. Filters each trial
// segment zero-phase with the standard filter design, squares, and takes
// mean power over the pair's windows. `valid_mask` marks trials excluded by
// artifact overlap (parallel to trials.trials).
PairChannelResult erd_for_pair(const Recording& recording,
                               const TrialSet& trials,
                               const std::vector<bool>& valid_mask,
                               const FrequencyBand& band,
                               const PeriodPair& pair,
                               const std::string& channel,
                               const AnalysisConfig& config);

struct StandardRunResult {
  std::vector<PairChannelResult> cells;  // pair-major, channel-minor order
  std::int64_t n_trials_analyzed = 0;    // valid after artifact exclusion
  std::int64_t n_trials_total = 0;
  std::int64_t n_excluded_artifact = 0;
};

// Full standard pipeline over a trial set: artifact suppression on the
// configured channels, per-method validity, band selection with fallback to
// the configured reporting band, then erd_for_pair per cell.
StandardRunResult run_standard(const Recording& recording,
                               const TrialSet& trials,
                               const AnalysisConfig& config);

}  // namespace erdkit
