#include "erdkit/synth.hpp"

#include <cmath>
#include <numbers>

#include "erdkit/dsp.hpp"
#include "erdkit/errors.hpp"

namespace erdkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// splitmix64: tiny, well-mixed, and stable across platforms. Substreams are
// derived by folding stream tags into the seed, so per-trial and per-channel
// draws are independent of generation order.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  static Rng substream(std::uint64_t seed, std::uint64_t tag_a,
                       std::uint64_t tag_b) {
    Rng mix(seed + 0x9e3779b97f4a7c15ULL * (tag_a + 1) +
            0xbf58476d1ce4e5b9ULL * (tag_b + 1));
    mix.next();
    mix.next();
    return mix;
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double gaussian() {  // Box-Muller; one draw per call, spares the pair
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }
};

// Unit-RMS pink noise (1/sqrt(f) magnitude shaping of white noise above the
// lower corner) of the requested length.
std::vector<double> pink_noise(Rng& rng, std::size_t length, double fs_hz,
                               double lowest_hz) {
  const std::size_t nfft = next_pow2(std::max<std::size_t>(length, 2));
  std::vector<std::complex<double>> buf(nfft);
  for (auto& c : buf) c = {rng.gaussian(), 0.0};
  fft(buf, false);
  for (std::size_t k = 0; k < nfft; ++k) {
    const std::size_t sym = k <= nfft / 2 ? k : nfft - k;
    const double f = static_cast<double>(sym) * fs_hz / static_cast<double>(nfft);
    buf[k] *= (f >= lowest_hz) ? 1.0 / std::sqrt(f) : 0.0;
  }
  fft(buf, true);
  std::vector<double> out(length);
  double power = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = buf[i].real();
    power += out[i] * out[i];
  }
  const double rms = std::sqrt(power / static_cast<double>(length));
  internal_check(rms > 0.0, "degenerate pink noise draw");
  for (auto& v : out) v /= rms;
  return out;
}

bool channel_affected(const Electrode& e,
                      const std::vector<Hemisphere>& groups) {
  if (groups.empty()) return true;
  for (Hemisphere h : groups) {
    if (e.hemisphere == h) return true;
  }
  return false;
}

// Mean squared envelope over a window, for closed-form truth ratios:
// env^2 = 1 - d/100 inside [cue1, movement_end), 1 elsewhere.
double window_env2(const SampleRange& w, std::int64_t cue1,
                   std::int64_t movement_end, double depth_fraction) {
  const std::int64_t lo = std::max(w.begin, cue1);
  const std::int64_t hi = std::min(w.end, movement_end);
  const std::int64_t inside = std::max<std::int64_t>(hi - lo, 0);
  const std::int64_t total = w.length();
  const double frac = static_cast<double>(inside) / static_cast<double>(total);
  return 1.0 - frac * depth_fraction;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_trials < 0) throw ConfigError("synth.n_trials must be nonnegative");
  if (!(fs_hz > 0.0)) throw ConfigError("synth.fs_hz must be positive");
  timing.validate();
  if (!(smr.erd_depth_percent >= 0.0 && smr.erd_depth_percent < 100.0)) {
    throw ConfigError("synth.smr.erd_depth_percent must be in [0, 100)");
  }
  if (!(fs_hz > 2.0 * (smr.center_hz + smr.bandwidth_hz))) {
    throw ConfigError("synth sample rate below twice the rhythm band top");
  }
  if (smr.rest_amplitude_uv < 0.0 || background.noise_rms_uv < 0.0) {
    throw ConfigError("synth amplitudes must be nonnegative");
  }
  if (!(background.common_fraction >= 0.0 && background.common_fraction <= 1.0)) {
    throw ConfigError("synth.background.common_fraction must be in [0, 1]");
  }
  if (!(artifact.probability_per_trial >= 0.0 &&
        artifact.probability_per_trial <= 1.0)) {
    throw ConfigError("synth.artifact.probability_per_trial must be in [0, 1]");
  }
  if (baseline_ms < 1500.0) {
    throw ConfigError("synth.baseline_ms too short for the baseline window");
  }
  if (inter_trial_rest_ms < 1500.0) {
    throw ConfigError("synth.inter_trial_rest_ms too short for the rest windows");
  }
}

SynthResult generate(const SynthSpec& spec_in) {
  SynthSpec spec = spec_in;
  if (spec.montage.size() == 0) spec.montage = default_montage();
  spec.validate();

  const double fs = spec.fs_hz;
  const std::int64_t pre = ms_to_samples(spec.timing.pre_trigger_ms, fs);
  const std::int64_t post = ms_to_samples(spec.timing.post_trigger_ms, fs);
  const std::int64_t reaction = ms_to_samples(spec.timing.reaction_ms, fs);
  const std::int64_t baseline = ms_to_samples(spec.baseline_ms, fs);
  const std::int64_t rest = ms_to_samples(spec.inter_trial_rest_ms, fs);

  // Lay out trials and triggers first.
  struct Landmarks {
    std::int64_t start, cue1, cue2, movement_end;
  };
  std::vector<Landmarks> marks;
  std::int64_t cursor = baseline;
  for (int t = 0; t < spec.n_trials; ++t) {
    std::int64_t movement;
    if (spec.movement_ms > 0.0) {
      movement = ms_to_samples(spec.movement_ms, fs);
    } else {
      Rng r = Rng::substream(spec.seed, 0xA11Fu, static_cast<std::uint64_t>(t));
      const double ms = spec.timing.movement_min_ms +
                        r.uniform() * (spec.timing.movement_max_ms -
                                       spec.timing.movement_min_ms);
      movement = ms_to_samples(ms, fs);
    }
    Landmarks m;
    m.start = cursor;
    m.cue1 = m.start + pre;
    m.cue2 = m.cue1 + post;
    m.movement_end = m.cue2 + reaction + movement;
    marks.push_back(m);
    cursor = m.movement_end + rest;
  }
  const std::int64_t n_samples = cursor + ms_to_samples(1000.0, fs);

  Recording rec;
  rec.fs_hz = fs;
  const std::size_t n_ch = spec.montage.size();
  for (const auto& e : spec.montage.electrodes()) rec.labels.push_back(e.label);
  rec.channels.assign(n_ch, std::vector<double>(
                                static_cast<std::size_t>(n_samples), 0.0));
  for (const auto& m : marks) {
    rec.triggers.push_back({m.start, TriggerCode::TrialStart});
    rec.triggers.push_back({m.cue1, TriggerCode::Cue1});
    rec.triggers.push_back({m.cue2, TriggerCode::Cue2});
    rec.triggers.push_back({m.movement_end, TriggerCode::MovementEnd});
  }

  const double depth_fraction = spec.smr.erd_depth_percent / 100.0;
  const double depth_gain = std::sqrt(1.0 - depth_fraction);
  const double amp = spec.smr.rest_amplitude_uv * std::sqrt(2.0);

  // Rhythm component. The envelope is shared; each trial draws a fresh global
  // phase and every electrode adds its fixed grid phase offset.
  std::vector<double> trial_phase(static_cast<std::size_t>(spec.n_trials));
  for (int t = 0; t < spec.n_trials; ++t) {
    Rng r = Rng::substream(spec.seed, 0x50A5u, static_cast<std::uint64_t>(t));
    trial_phase[static_cast<std::size_t>(t)] = r.uniform() * kTwoPi;
  }
  // Piecewise-constant envelope and phase bookkeeping over the record. The
  // per-trial phase switches in the middle of the inter-trial gap so the new
  // value is already in steady state wherever the analysis windows (and the
  // filter spans feeding them) can reach.
  std::vector<double> envelope(static_cast<std::size_t>(n_samples), 1.0);
  std::vector<double> phase0(static_cast<std::size_t>(n_samples), 0.0);
  {
    std::size_t t = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
      while (t + 1 < marks.size() && i >= marks[t].movement_end + rest / 2) {
        ++t;
      }
      if (!marks.empty()) {
        phase0[static_cast<std::size_t>(i)] = trial_phase[t];
        if (i >= marks[t].cue1 && i < marks[t].movement_end) {
          envelope[static_cast<std::size_t>(i)] = depth_gain;
        }
      }
    }
  }
  // Optional slow phase drift widens the rhythm line to ~bandwidth_hz.
  std::vector<double> drift;
  if (spec.smr.bandwidth_hz > 0.0) {
    drift.assign(static_cast<std::size_t>(n_samples), 0.0);
    Rng r = Rng::substream(spec.seed, 0xD21F7u, 0);
    const double sigma = kTwoPi * (spec.smr.bandwidth_hz / 2.0) / std::sqrt(fs);
    double acc = 0.0;
    for (auto& d : drift) {
      acc += sigma * r.gaussian();
      d = acc;
    }
  }

  std::vector<double> common;
  if (spec.background.noise_rms_uv > 0.0 && spec.background.common_fraction > 0.0) {
    Rng r = Rng::substream(spec.seed, 0xC0330u, 1);
    common = pink_noise(r, static_cast<std::size_t>(n_samples), fs,
                        spec.background.lowest_hz);
  }

  const double w0 = kTwoPi * spec.smr.center_hz / fs;
  for (std::size_t c = 0; c < n_ch; ++c) {
    const Electrode& e = spec.montage.electrodes()[c];
    const bool affected = channel_affected(e, spec.smr.affected_groups);
    const double ch_phase = spec.smr.phase_gradient_col_rad * e.grid_col +
                            spec.smr.phase_gradient_row_rad * e.grid_row;
    auto& ch = rec.channels[c];
    if (amp > 0.0 && affected) {
      for (std::int64_t i = 0; i < n_samples; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double ph = w0 * static_cast<double>(i) + phase0[u] + ch_phase +
                          (drift.empty() ? 0.0 : drift[u]);
        ch[u] = amp * envelope[u] * std::sin(ph);
      }
    }
    if (spec.background.noise_rms_uv > 0.0) {
      Rng r = Rng::substream(spec.seed, 0x4015Eu, c);
      const double cf = spec.background.common_fraction;
      const double w_common = std::sqrt(cf);
      const double w_own = std::sqrt(1.0 - cf);
      std::vector<double> own;
      if (w_own > 0.0) {
        own = pink_noise(r, static_cast<std::size_t>(n_samples), fs,
                         spec.background.lowest_hz);
      }
      for (std::int64_t i = 0; i < n_samples; ++i) {
        const auto u = static_cast<std::size_t>(i);
        double nz = 0.0;
        if (!common.empty()) nz += w_common * common[u];
        if (!own.empty()) nz += w_own * own[u];
        ch[u] += spec.background.noise_rms_uv * nz;
      }
    }
  }

  // Ground truth from the closed-form envelope.
  GroundTruth truth;
  truth.erd_depth_percent = spec.smr.erd_depth_percent;
  truth.band = FrequencyBand{spec.smr.center_hz - 1.0, spec.smr.center_hz + 1.0};
  const std::int64_t one_s = ms_to_samples(1000.0, fs);
  const std::int64_t half_s = ms_to_samples(spec.timing.post_trigger_ms / 3.0, fs);
  const std::int64_t r1a = ms_to_samples(spec.timing.r1_anchor_ms, fs);
  for (const auto& m : marks) {
    TrialTruth tt;
    tt.trial_start = m.start;
    tt.cue1 = m.cue1;
    tt.cue2 = m.cue2;
    tt.movement_end = m.movement_end;
    auto env2 = [&](SampleRange w) {
      return window_env2(w, m.cue1, m.movement_end, depth_fraction);
    };
    const double r1 = env2({r1a, r1a + one_s});
    const double r2 = env2({m.cue1 - one_s, m.cue1});
    const double a1 = env2({m.cue1, m.cue1 + one_s});
    const double a2 = env2({m.cue2 + reaction, m.cue2 + reaction + one_s});
    const double a3 = env2({m.movement_end, m.movement_end + one_s});
    tt.period_ratio["R1"] = 1.0;
    tt.period_ratio["R2"] = r2 / r1;
    tt.period_ratio["A1"] = a1 / r2;
    tt.period_ratio["A2"] = a2 / a1;
    tt.period_ratio["A3"] = a3 / a2;
    const double p0 = env2({m.cue1 - half_s, m.cue1});
    const double p1 = env2({m.cue1, m.cue1 + half_s});
    const double p2 = env2({m.cue1 + half_s, m.cue1 + 2 * half_s});
    const double p3 = env2({m.cue1 + 2 * half_s, m.cue1 + 3 * half_s});
    const double pr = env2({m.cue2, m.cue2 + reaction});
    tt.period_ratio["Pre"] = 1.0;
    tt.period_ratio["Post1"] = p1 / p0;
    tt.period_ratio["Post2"] = p2 / p1;
    tt.period_ratio["Post3"] = p3 / p2;
    tt.period_ratio["Reaction"] = pr / p3;
    truth.trials.push_back(std::move(tt));
  }

  // Optional artifact injection, bookkept in the truth.
  if (spec.artifact.probability_per_trial > 0.0) {
    for (std::size_t t = 0; t < marks.size(); ++t) {
      Rng r = Rng::substream(spec.seed, 0xAF7u, t);
      if (r.uniform() >= spec.artifact.probability_per_trial) continue;
      const auto& m = marks[t];
      const std::size_t ch = static_cast<std::size_t>(
          r.uniform() * static_cast<double>(n_ch));
      const std::int64_t span = m.movement_end - m.start;
      const std::int64_t at =
          m.start + static_cast<std::int64_t>(r.uniform() *
                                              static_cast<double>(span));
      rec = inject_polarization_artifact(rec, rec.labels[ch], at,
                                         spec.artifact.peak_uv,
                                         spec.artifact.decay_ms);
      const std::int64_t tail = ms_to_samples(5.0 * spec.artifact.decay_ms, fs);
      truth.trials[t].injected_artifacts.push_back(
          {at, std::min(at + tail, n_samples)});
      truth.trials[t].artifact_channel = rec.labels[ch];
    }
  }

  SynthResult result;
  result.trials = segment_trials(rec, spec.timing);
  result.recording = std::move(rec);
  result.truth = std::move(truth);
  return result;
}

std::vector<double> polarization_transient(std::int64_t length,
                                           std::int64_t at_sample,
                                           double peak_uv, double decay_ms,
                                           double fs_hz) {
  std::vector<double> out(static_cast<std::size_t>(length), 0.0);
  if (peak_uv == 0.0) return out;
  const double tau = decay_ms * fs_hz / 1000.0;
  for (std::int64_t i = at_sample; i < length; ++i) {
    out[static_cast<std::size_t>(i)] =
        peak_uv * std::exp(-static_cast<double>(i - at_sample) / tau);
  }
  return out;
}

Recording inject_polarization_artifact(const Recording& recording,
                                       const std::string& channel,
                                       std::int64_t at_sample, double peak_uv,
                                       double decay_ms) {
  if (at_sample < 0 || at_sample >= recording.n_samples()) {
    throw InputError("artifact injection sample outside recording");
  }
  Recording out = recording;
  const std::size_t c = out.channel_index(channel);
  const auto transient = polarization_transient(out.n_samples(), at_sample,
                                                peak_uv, decay_ms, out.fs_hz);
  for (std::size_t i = 0; i < transient.size(); ++i) {
    out.channels[c][i] += transient[i];
  }
  return out;
}

}  // namespace erdkit
