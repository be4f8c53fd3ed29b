#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erdkit/bands.hpp"
#include "erdkit/montage.hpp"
#include "erdkit/recording.hpp"
#include "erdkit/timing.hpp"

namespace erdkit {

// Synthetic EEG with fully known ground truth: pink background noise plus a
// narrowband sensorimotor rhythm whose amplitude drops by sqrt(1 - depth/100)
// from cue1 to movement end, with per-trial randomized phase. This generator
// is the verification oracle for both analysis pipelines.
struct SynthSpec {
  int n_trials = 80;
  double fs_hz = 512.0;
  TrialTiming timing;
  Montage montage;  // default-initialized members are filled by defaults()

  struct Smr {
    double center_hz = 12.5;
    double bandwidth_hz = 0.0;        // > 0 adds slow random phase drift
    double rest_amplitude_uv = 10.0;  // RMS at rest
    double erd_depth_percent = 50.0;  // energy drop during planning/movement
    // Per-trial global phase is random; electrodes add a fixed phase offset
    // along the grid (traveling-wave model) so nearby-electrode differences
    // retain a deterministic fraction of the rhythm.
    double phase_gradient_col_rad = 0.9;
    double phase_gradient_row_rad = 0.55;
    // Hemispheres carrying the rhythm; empty = all electrodes.
    std::vector<Hemisphere> affected_groups;
  } smr;

  struct Background {
    double noise_rms_uv = 3.1622776601683795;  // 10 dB below a 10 uV rhythm
    double common_fraction = 0.5;  // share of noise power common to channels
    double lowest_hz = 0.5;        // pink shaping lower corner
  } background;

  struct Artifact {
    double probability_per_trial = 0.0;
    double peak_uv = 500.0;
    double decay_ms = 50.0;
  } artifact;

  // Recording layout: baseline rest before the first trial and rest after
  // each movement end. Defaults leave room for every analysis window.
  double baseline_ms = 3000.0;
  double inter_trial_rest_ms = 2000.0;
  double movement_ms = 620.0;  // actual movement duration used by the fixture

  std::uint64_t seed = 12345;

  void validate() const;  // throws ConfigError
};

// Closed-form per-trial truth, defined on the noiseless rhythm component.
struct TrialTruth {
  std::int64_t trial_start = 0;
  std::int64_t cue1 = 0;
  std::int64_t cue2 = 0;
  std::int64_t movement_end = 0;
  // True rhythm-component energy ratio of each period relative to the
  // preceding period of its family, keyed by period name ("R2", "A1", ...,
  // "Post1", ...). First period of each family is keyed against itself = 1.
  std::map<std::string, double> period_ratio;
  std::vector<SampleRange> injected_artifacts;  // empty unless injected
  std::string artifact_channel;
};

struct GroundTruth {
  double erd_depth_percent = 0.0;
  FrequencyBand band;  // rhythm band (center +- 1 Hz)
  std::vector<TrialTruth> trials;
};

struct SynthResult {
  Recording recording;
  TrialSet trials;
  GroundTruth truth;
};

// Deterministic for a fixed seed; per-trial and per-channel substreams are
// derived from the seed so generation order cannot matter.
SynthResult generate(const SynthSpec& spec);

// Adds a step-plus-exponential-decay transient (electrode polarization) to
// one channel; the input recording is left unmodified. Throws InputError on
// unknown channel or out-of-range sample.
Recording inject_polarization_artifact(const Recording& recording,
                                       const std::string& channel,
                                       std::int64_t at_sample, double peak_uv,
                                       double decay_ms);

// The transient that inject_polarization_artifact adds, for exactness tests.
std::vector<double> polarization_transient(std::int64_t length,
                                           std::int64_t at_sample,
                                           double peak_uv, double decay_ms,
                                           double fs_hz);

}  // namespace erdkit
