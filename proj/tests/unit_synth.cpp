#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "erdkit/errors.hpp"
#include "erdkit/synth.hpp"
#include "helpers.hpp"

using namespace erdkit;

namespace {

double window_rss(const std::vector<double>& x, const SampleRange& span) {
  double acc = 0.0;
  for (std::int64_t i = span.begin; i < span.end; ++i) {
    acc += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  return acc;
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
  SynthSpec spec = testutil::small_synth_spec(6, 50.0, 3.0, 2024);
  spec.artifact.probability_per_trial = 0.5;
  spec.movement_ms = 0.0;  // draw movement lengths from the seed

  const SynthResult a = generate(spec);
  const SynthResult b = generate(spec);

  REQUIRE(a.recording.channels.size() == b.recording.channels.size());
  for (std::size_t c = 0; c < a.recording.channels.size(); ++c) {
    CHECK(a.recording.channels[c] == b.recording.channels[c]);  // bit-exact
  }
  REQUIRE(a.recording.triggers.size() == b.recording.triggers.size());
  for (std::size_t i = 0; i < a.recording.triggers.size(); ++i) {
    CHECK(a.recording.triggers[i].sample_index ==
          b.recording.triggers[i].sample_index);
    CHECK(a.recording.triggers[i].code == b.recording.triggers[i].code);
  }
  REQUIRE(a.truth.trials.size() == b.truth.trials.size());
  for (std::size_t t = 0; t < a.truth.trials.size(); ++t) {
    CHECK(a.truth.trials[t].period_ratio == b.truth.trials[t].period_ratio);
    CHECK(a.truth.trials[t].injected_artifacts ==
          b.truth.trials[t].injected_artifacts);
    CHECK(a.truth.trials[t].artifact_channel ==
          b.truth.trials[t].artifact_channel);
  }

  // A different seed produces different samples.
  spec.seed = 2025;
  const SynthResult c = generate(spec);
  CHECK(c.recording.channels[0] != a.recording.channels[0]);
}

TEST_CASE("recording structure and trial segmentation") {
  SynthSpec spec = testutil::small_synth_spec(80, 50.0, 3.0, 7);
  const SynthResult out = generate(spec);

  out.recording.validate();
  CHECK(out.recording.labels.size() == 16);
  CHECK(out.recording.fs_hz == 512.0);
  CHECK(out.recording.triggers.size() == 4 * 80);
  REQUIRE(out.trials.trials.size() == 80);
  CHECK(out.trials.n_valid() == 80);
  REQUIRE(out.truth.trials.size() == 80);
  CHECK(out.truth.erd_depth_percent == 50.0);
  CHECK(out.truth.band.lo_hz == doctest::Approx(11.0));
  CHECK(out.truth.band.hi_hz == doctest::Approx(13.0));

  for (std::size_t t = 0; t < out.trials.trials.size(); ++t) {
    const Trial& trial = out.trials.trials[t];
    const TrialTruth& truth = out.truth.trials[t];
    CHECK(trial.trial_start == truth.trial_start);
    CHECK(trial.cue1 == truth.cue1);
    CHECK(trial.cue2 == truth.cue2);
    CHECK(trial.movement_end == truth.movement_end);
    CHECK(trial.cue1 - trial.trial_start == 256);   // 500 ms at 512 Hz
    CHECK(trial.cue2 - trial.cue1 == 768);          // 1500 ms
    CHECK(trial.movement_end > trial.cue2 + 256);   // reaction + movement
  }
}

TEST_CASE("ground-truth ratios at zero depth are all one") {
  const SynthResult out = generate(testutil::small_synth_spec(4, 0.0, 0.0, 3));
  for (const TrialTruth& t : out.truth.trials) {
    REQUIRE(t.period_ratio.size() == 10);
    for (const auto& [name, ratio] : t.period_ratio) {
      CHECK_MESSAGE(ratio == 1.0, name);
    }
  }
}

TEST_CASE("ground-truth ratios at depth 50 follow the envelope") {
  const SynthResult out = generate(testutil::small_synth_spec(4, 50.0, 0.0, 3));
  for (const TrialTruth& t : out.truth.trials) {
    CHECK(t.period_ratio.at("R1") == 1.0);
    CHECK(t.period_ratio.at("R2") == 1.0);          // still resting
    CHECK(t.period_ratio.at("A1") == 0.5);          // drop at cue1, exact
    CHECK(t.period_ratio.at("Pre") == 1.0);
    CHECK(t.period_ratio.at("Post1") == 0.5);       // the onset transition
    CHECK(t.period_ratio.at("Post2") == 1.0);
    CHECK(t.period_ratio.at("Post3") == 1.0);
    CHECK(t.period_ratio.at("Reaction") == 1.0);
    // A2 spans the recovery at movement end; bounded between the two regimes.
    CHECK(t.period_ratio.at("A2") >= 1.0);
    CHECK(t.period_ratio.at("A2") <= 2.0);
  }
}

TEST_CASE("noiseless window energies reproduce the truth ratios") {
  // 12 Hz at 512 Hz puts whole rhythm cycles in every analysis window, so
  // raw squared-sample sums measure envelope energy exactly.
  SynthSpec spec = testutil::small_synth_spec(3, 50.0, 0.0, 11);
  const SynthResult out = generate(spec);
  const auto& x = out.recording.channels[out.recording.channel_index("C3")];

  for (std::size_t t = 0; t < out.trials.trials.size(); ++t) {
    const Trial& trial = out.trials.trials[t];
    const TrialTruth& truth = out.truth.trials[t];
    const auto bounds = [&](PeriodKind k) {
      return period_bounds(trial, k, spec.timing, spec.fs_hz,
                           out.recording.n_samples());
    };
    const double pre = window_rss(x, bounds(PeriodKind::PreTrigger));
    const double post1 = window_rss(x, bounds(PeriodKind::Post1));
    const double post2 = window_rss(x, bounds(PeriodKind::Post2));
    const double rt = window_rss(x, bounds(PeriodKind::ReactionTime));
    CHECK(post1 / pre ==
          doctest::Approx(truth.period_ratio.at("Post1")).epsilon(1e-9));
    CHECK(post2 / post1 ==
          doctest::Approx(truth.period_ratio.at("Post2")).epsilon(1e-9));
    const double r2 = window_rss(x, bounds(PeriodKind::R2));
    const double a1 = window_rss(x, bounds(PeriodKind::A1));
    CHECK(a1 / r2 ==
          doctest::Approx(truth.period_ratio.at("A1")).epsilon(1e-9));
    CHECK(rt > 0.0);
  }
}

TEST_CASE("noise level does not alter the ground truth") {
  SynthSpec quiet = testutil::small_synth_spec(5, 50.0, 0.0, 77);
  quiet.movement_ms = 0.0;
  SynthSpec loud = quiet;
  loud.background.noise_rms_uv = 8.0;

  const SynthResult a = generate(quiet);
  const SynthResult b = generate(loud);
  REQUIRE(a.truth.trials.size() == b.truth.trials.size());
  for (std::size_t t = 0; t < a.truth.trials.size(); ++t) {
    CHECK(a.truth.trials[t].movement_end == b.truth.trials[t].movement_end);
    CHECK(a.truth.trials[t].period_ratio == b.truth.trials[t].period_ratio);
  }
}

TEST_CASE("polarization transient shape") {
  const auto v = polarization_transient(1000, 100, 400.0, 50.0, 512.0);
  REQUIRE(v.size() == 1000);
  for (std::size_t i = 0; i < 100; ++i) CHECK(v[i] == 0.0);
  CHECK(v[100] == 400.0);
  const double tau = 50.0 * 512.0 / 1000.0;  // samples
  CHECK(v[110] == doctest::Approx(400.0 * std::exp(-10.0 / tau)).epsilon(1e-12));
  CHECK(v[300] < v[150]);
  CHECK(polarization_transient(100, 10, 0.0, 50.0, 512.0) ==
        std::vector<double>(100, 0.0));
}

TEST_CASE("artifact injection is additive and local to one channel") {
  SynthSpec spec = testutil::small_synth_spec(2, 50.0, 2.0, 5);
  const SynthResult out = generate(spec);
  const std::int64_t at = out.trials.trials[0].cue1 + 10;
  const Recording dirty =
      inject_polarization_artifact(out.recording, "Cz", at, 500.0, 50.0);

  const std::size_t cz = out.recording.channel_index("Cz");
  const auto expected = polarization_transient(out.recording.n_samples(), at,
                                               500.0, 50.0, spec.fs_hz);
  // Additive up to one rounding step of the carrier: deep in the tail the
  // transient drops below one ulp of the signal and is absorbed by the sum.
  double worst = 0.0;
  bool others_touched = false;
  for (std::size_t c = 0; c < out.recording.channels.size(); ++c) {
    for (std::size_t i = 0; i < out.recording.channels[c].size(); ++i) {
      const double delta = dirty.channels[c][i] - out.recording.channels[c][i];
      if (c == cz) {
        worst = std::max(worst, std::abs(delta - expected[i]));
      } else if (delta != 0.0) {
        others_touched = true;
      }
    }
  }
  CHECK(worst < 1e-9);
  CHECK(!others_touched);

  // The step dominates every clean first difference by a wide margin.
  double clean_max = 0.0;
  for (std::size_t i = 1; i < out.recording.channels[cz].size(); ++i) {
    clean_max = std::max(clean_max,
                         std::abs(out.recording.channels[cz][i] -
                                  out.recording.channels[cz][i - 1]));
  }
  const double step = std::abs(dirty.channels[cz][static_cast<std::size_t>(at)] -
                               dirty.channels[cz][static_cast<std::size_t>(at) - 1]);
  CHECK(step > 10.0 * clean_max);

  CHECK_THROWS_AS(
      inject_polarization_artifact(out.recording, "Oz", at, 500.0, 50.0),
      InputError);
  CHECK_THROWS_AS(inject_polarization_artifact(out.recording, "Cz",
                                               out.recording.n_samples(),
                                               500.0, 50.0),
                  InputError);
}

TEST_CASE("generator-injected artifacts are recorded in the truth") {
  SynthSpec spec = testutil::small_synth_spec(8, 50.0, 2.0, 9);
  spec.artifact.probability_per_trial = 1.0;
  const SynthResult out = generate(spec);
  for (std::size_t t = 0; t < out.truth.trials.size(); ++t) {
    const TrialTruth& truth = out.truth.trials[t];
    REQUIRE(truth.injected_artifacts.size() == 1);
    CHECK(out.recording.channel_index(truth.artifact_channel) <
          out.recording.channels.size());
    const SampleRange span = truth.injected_artifacts[0];
    CHECK(span.begin >= truth.trial_start);
    CHECK(span.begin < truth.movement_end);
    CHECK(span.end > span.begin);
    CHECK(span.end <= out.recording.n_samples());
  }

  spec.artifact.probability_per_trial = 0.0;
  const SynthResult clean = generate(spec);
  for (const TrialTruth& truth : clean.truth.trials) {
    CHECK(truth.injected_artifacts.empty());
    CHECK(truth.artifact_channel.empty());
  }
}

TEST_CASE("spec validation") {
  SynthSpec spec = testutil::small_synth_spec(4, 50.0, 1.0, 1);
  CHECK_NOTHROW(spec.validate());

  SynthSpec bad = spec;
  bad.smr.erd_depth_percent = 100.0;  // would zero the reference energy
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = spec;
  bad.fs_hz = 20.0;  // rhythm above Nyquist
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = spec;
  bad.smr.rest_amplitude_uv = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = spec;
  bad.baseline_ms = 100.0;  // no room for the anchored baseline window
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = spec;
  bad.background.common_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = spec;
  bad.n_trials = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
