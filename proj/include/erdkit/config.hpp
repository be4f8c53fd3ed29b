#pragma once

#include <string>
#include <vector>

#include "erdkit/artifact.hpp"
#include "erdkit/bands.hpp"
#include "erdkit/dsp.hpp"
#include "erdkit/montage.hpp"
#include "erdkit/synth.hpp"
#include "erdkit/timing.hpp"

namespace erdkit {

// Everything both pipelines need, loadable from one JSON document; every
// field has a default so `--config default` works without a file.
struct AnalysisConfig {
  Montage montage;
  TrialTiming timing;
  std::vector<DifferentialPair> differential_pairs;

  struct Bands {
    double range_lo_hz = 5.5;
    double range_hi_hz = 16.5;
    double width_hz = 2.0;
    double overlap_hz = 1.0;  // hop = width - overlap
    FrequencyBand reporting_band{11.5, 13.5};

    double hop_hz() const { return width_hz - overlap_hz; }
  } bands;

  double identification_threshold_percent = 40.0;  // 20 = laxer variant
  ArtifactParams artifact;

  struct Filters {
    FilterSpec standard{1.0, 40.0};  // offline zero-phase path
    FilterSpec novel{8.0, 40.0};     // short causal streaming path
  } filters;

  struct Standard {
    std::vector<std::string> channels{"C3", "Cz", "C4"};
    int min_trials_for_selection = 8;
    bool average_trial_mode = false;  // average power across trials first
  } standard;

  struct Bench {
    int repetitions = 5;
  } bench;

  bool strict_pair_adjacency = true;
  std::uint64_t seed = 12345;

  SynthSpec synth;  // used by the synth subcommand; timing/montage mirrored

  void validate() const;  // throws ConfigError
};

AnalysisConfig default_config();

// Parses a JSON config document; unknown keys are rejected (they are almost
// always typos), missing keys keep defaults. Throws ConfigError / FormatError.
AnalysisConfig load_config(const std::string& path);
AnalysisConfig parse_config_json(const std::string& json_text);
std::string config_to_json(const AnalysisConfig& config);

}  // namespace erdkit
