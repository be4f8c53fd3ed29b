#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "erdkit/config.hpp"
#include "erdkit/recording.hpp"
#include "erdkit/synth.hpp"

namespace testutil {

// Deterministic gaussian source for fixtures (independent of the library's
// internals and of implementation-defined std distributions).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * uniform());
  }
};

inline std::vector<double> tone(double amplitude, double f_hz, double fs_hz,
                                std::size_t n, double phase = 0.0) {
  std::vector<double> out(n);
  const double w = 2.0 * std::numbers::pi * f_hz / fs_hz;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = amplitude * std::sin(w * static_cast<double>(i) + phase);
  }
  return out;
}

inline std::vector<double> white_noise(Rng& rng, std::size_t n,
                                       double rms = 1.0) {
  std::vector<double> out(n);
  for (auto& v : out) v = rms * rng.gaussian();
  return out;
}

inline double rms(const std::vector<double>& x, std::size_t begin,
                  std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(end - begin));
}

// A small synthetic spec sized for unit tests: fixture rhythm frequency with
// whole cycles per window at 512 Hz, default montage and timing.
inline erdkit::SynthSpec small_synth_spec(int n_trials, double depth_percent,
                                          double noise_rms,
                                          std::uint64_t seed) {
  erdkit::SynthSpec spec;
  spec.n_trials = n_trials;
  spec.smr.center_hz = 12.0;
  spec.smr.erd_depth_percent = depth_percent;
  spec.background.noise_rms_uv = noise_rms;
  spec.seed = seed;
  spec.montage = erdkit::default_montage();
  return spec;
}

inline erdkit::AnalysisConfig test_config() {
  erdkit::AnalysisConfig cfg = erdkit::default_config();
  cfg.synth = small_synth_spec(12, 50.0, 0.0, 99);
  cfg.synth.timing = cfg.timing;
  return cfg;
}

}  // namespace testutil
