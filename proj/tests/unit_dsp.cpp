#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "erdkit/dsp.hpp"
#include "erdkit/errors.hpp"
#include "helpers.hpp"

using namespace erdkit;

namespace {

const FrequencyBand kReportingBand{11.5, 13.5};

BandpassFilter slow_filter() {
  return design_bandpass(kReportingBand, 512.0, FilterSpec{1.0, 40.0});
}

BandpassFilter fast_filter() {
  return design_bandpass(kReportingBand, 512.0, FilterSpec{8.0, 40.0});
}

}  // namespace

TEST_CASE("fft round trip and Parseval") {
  testutil::Rng rng(3);
  std::vector<std::complex<double>> data(1024);
  for (auto& v : data) v = {rng.gaussian(), rng.gaussian()};
  const auto original = data;

  double time_energy = 0.0;
  for (const auto& v : data) time_energy += std::norm(v);

  fft(data, false);
  double freq_energy = 0.0;
  for (const auto& v : data) freq_energy += std::norm(v);
  CHECK(freq_energy / static_cast<double>(data.size()) ==
        doctest::Approx(time_energy).epsilon(1e-12));

  fft(data, true);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(std::abs(data[i] - original[i]) < 1e-10);
  }
}

TEST_CASE("fft locates a pure tone") {
  const std::size_t n = 512;
  std::vector<std::complex<double>> data(n);
  const auto x = testutil::tone(1.0, 20.0, 512.0, n);  // bin 20 at 1 Hz grid
  for (std::size_t i = 0; i < n; ++i) data[i] = x[i];
  fft(data, false);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (std::abs(data[k]) > std::abs(data[peak])) peak = k;
  }
  CHECK(peak == 20);
  CHECK(next_pow2(1000) == 1024);
  CHECK(next_pow2(1024) == 1024);
  CHECK(next_pow2(1) == 1);
}

TEST_CASE("band-pass design: tap count and group delay") {
  const auto slow = slow_filter();
  CHECK(slow.taps.size() == 513);
  CHECK(slow.group_delay_samples() == 256);
  CHECK(slow.group_delay_ms() == 500.0);

  const auto fast = fast_filter();
  CHECK(fast.taps.size() == 65);
  CHECK(fast.group_delay_samples() == 32);
  CHECK(fast.group_delay_ms() == 62.5);

  for (const auto* f : {&slow, &fast}) {
    REQUIRE(f->taps.size() % 2 == 1);
    const std::size_t L = f->taps.size();
    for (std::size_t k = 0; k < L; ++k) {
      CHECK(f->taps[k] == f->taps[L - 1 - k]);  // exact linear phase
    }
    CHECK(f->group_delay_samples() ==
          static_cast<std::int64_t>((L - 1) / 2));
  }
}

TEST_CASE("band-pass design: frequency response") {
  const auto slow = slow_filter();
  const double half_power = std::numbers::sqrt2 / 2.0;

  // The solved margin puts the mean of the two edge gains exactly at half
  // power; each edge straddles it within the response's residual asymmetry.
  const double slow_lo = slow.magnitude_at(11.5);
  const double slow_hi = slow.magnitude_at(13.5);
  CHECK(0.5 * (slow_lo + slow_hi) == doctest::Approx(half_power).epsilon(1e-9));
  CHECK(std::abs(slow_lo - half_power) < 5e-5);
  CHECK(std::abs(slow_hi - half_power) < 5e-5);

  // Pass band flat within 1 dB at center.
  CHECK(std::abs(20.0 * std::log10(slow.magnitude_at(12.5))) < 1.0);

  // 20 Hz rejected by at least 40 dB (amplitude factor 100).
  CHECK(slow.magnitude_at(20.0) < 0.01);
  CHECK(slow.magnitude_at(6.0) < 0.01);

  // The short filter trades selectivity for latency: its main lobe is wider
  // than the 2 Hz band, so the center sits near the edges' half-power level
  // rather than at unit gain (energy ratios cancel the constant anyway).
  const auto fast = fast_filter();
  const double fast_lo = fast.magnitude_at(11.5);
  const double fast_hi = fast.magnitude_at(13.5);
  CHECK(0.5 * (fast_lo + fast_hi) == doctest::Approx(half_power).epsilon(1e-9));
  CHECK(std::abs(fast_lo - half_power) < 1e-2);
  CHECK(std::abs(fast_hi - half_power) < 1e-2);
  const double fast_center = fast.magnitude_at(12.5);
  CHECK(fast_center > fast_lo);
  CHECK(fast_center > fast_hi);
  CHECK(fast_center < 1.0);

  CHECK_THROWS_AS(design_bandpass({200.0, 260.0}, 512.0, FilterSpec{}),
                  ConfigError);
  CHECK_THROWS_AS(design_bandpass({13.5, 11.5}, 512.0, FilterSpec{}),
                  ConfigError);
}

TEST_CASE("out-of-band tone attenuated 40 dB in steady state") {
  const auto filter = slow_filter();
  const std::size_t n = 8192;
  const auto x = testutil::tone(1.0, 20.0, 512.0, n);
  const auto y = apply_filter(filter, x, FilterMode::Causal);
  // Skip the transient: measure after the filter is fully primed.
  const std::size_t start = 2 * filter.taps.size();
  const double out_rms = testutil::rms(y, start, n);
  const double in_rms = testutil::rms(x, start, n);
  CHECK(20.0 * std::log10(in_rms / out_rms) > 40.0);
}

TEST_CASE("zero-phase mode preserves alignment and amplitude in band") {
  const auto filter = slow_filter();
  const std::size_t n = 8192;
  const auto x = testutil::tone(1.0, 12.5, 512.0, n);
  const auto y = apply_filter(filter, x, FilterMode::ZeroPhase);
  REQUIRE(y.size() == x.size());

  // In the steady-state interior the output must match the input up to the
  // in-band gain, with no phase shift: normalized correlation at lag 0 ~ 1.
  const std::size_t a = filter.taps.size();
  const std::size_t b = n - filter.taps.size();
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  CHECK(xy / std::sqrt(xx * yy) == doctest::Approx(1.0).epsilon(1e-6));
  const double gain = std::sqrt(yy / xx);
  CHECK(gain == doctest::Approx(filter.magnitude_at(12.5)).epsilon(1e-3));
}

TEST_CASE("filtering is linear") {
  const auto filter = fast_filter();
  testutil::Rng rng(11);
  const auto x1 = testutil::white_noise(rng, 2048);
  const auto x2 = testutil::white_noise(rng, 2048);
  std::vector<double> mix(2048);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix[i] = 2.0 * x1[i] - 0.5 * x2[i];
  }
  const auto y1 = apply_filter(filter, x1, FilterMode::Causal);
  const auto y2 = apply_filter(filter, x2, FilterMode::Causal);
  const auto ym = apply_filter(filter, mix, FilterMode::Causal);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    CHECK(ym[i] == doctest::Approx(2.0 * y1[i] - 0.5 * y2[i]).epsilon(1e-9));
  }
}

TEST_CASE("disjoint bank tiles in-band power") {
  // Tiling: over back-to-back disjoint bands each interior frequency lies in
  // one passband, and shared edges cross at half power (0.5 + 0.5), so
  // squared magnitudes sum to about one across the span.
  std::vector<BandpassFilter> filters;
  for (double lo = 5.5; lo + 2.0 <= 15.6; lo += 2.0) {
    filters.push_back(
        design_bandpass({lo, lo + 2.0}, 512.0, FilterSpec{1.0, 40.0}));
  }
  REQUIRE(filters.size() == 5);
  for (double f = 7.6; f <= 14.4; f += 0.2) {
    double total = 0.0;
    for (const auto& filt : filters) {
      const double m = filt.magnitude_at(f);
      total += m * m;
    }
    CHECK_MESSAGE(total > 0.90, "f=", f, " total=", total);
    CHECK_MESSAGE(total < 1.10, "f=", f, " total=", total);
  }
}

TEST_CASE("streaming convolution matches one-shot causal under any chunking") {
  const auto filter = fast_filter();
  testutil::Rng rng(21);
  const auto x = testutil::white_noise(rng, 3000);
  const auto reference = apply_filter(filter, x, FilterMode::Causal);

  for (const std::size_t chunk : {std::size_t{1}, std::size_t{7},
                                  std::size_t{64}, std::size_t{333},
                                  std::size_t{3000}}) {
    StreamingFir stream(filter);
    std::vector<double> got;
    for (std::size_t i = 0; i < x.size(); i += chunk) {
      const std::size_t stop = std::min(i + chunk, x.size());
      const std::vector<double> piece(x.begin() + static_cast<std::ptrdiff_t>(i),
                                      x.begin() + static_cast<std::ptrdiff_t>(stop));
      const auto out = stream.process(piece);
      got.insert(got.end(), out.begin(), out.end());
    }
    REQUIRE(got.size() == reference.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == reference[i]);  // bit-exact
    }
  }

  StreamingFir stream(filter);
  const auto first = stream.process(x);
  stream.reset();
  const auto second = stream.process(x);
  CHECK(first == second);
}

TEST_CASE("window energy and mean power") {
  const std::size_t n = 1024;
  const auto x = testutil::tone(2.0, 12.0, 512.0, n);  // whole cycles in window
  const double e = window_energy(x, {0, static_cast<std::int64_t>(n)});
  CHECK(e == doctest::Approx(2.0 * 2.0 * static_cast<double>(n) / 2.0)
                 .epsilon(1e-3));
  CHECK(mean_power(x, {0, static_cast<std::int64_t>(n)}) ==
        doctest::Approx(e / static_cast<double>(n)).epsilon(1e-12));

  // Energies add exactly over a partition of the window.
  double parts = 0.0;
  for (int q = 0; q < 4; ++q) {
    parts += window_energy(x, {q * 256, (q + 1) * 256});
  }
  CHECK(parts == doctest::Approx(e).epsilon(1e-12));

  CHECK_THROWS_AS(window_energy(x, {10, 10}), InputError);
  CHECK_THROWS_AS(window_energy(x, {512, 2048}), InputError);
  CHECK_THROWS_AS(window_energy(x, {-1, 10}), InputError);
}

TEST_CASE("mean log spectrum: grid, peak location and flatness") {
  const double fs = 512.0;
  const SpectrumConfig cfg;

  // 16 two-second windows of seeded white noise.
  testutil::Rng rng(5);
  std::vector<std::vector<double>> windows;
  for (int t = 0; t < 16; ++t) {
    windows.push_back(testutil::white_noise(rng, 1024));
  }
  const PowerSpectrum white = mean_log_spectrum(windows, fs, cfg);
  CHECK(white.bin_width_hz() == doctest::Approx(0.5));
  CHECK(white.n_trials == 16);
  REQUIRE(white.log_power.size() == white.frequencies_hz.size());
  REQUIRE(white.log_power_se.size() == white.frequencies_hz.size());

  // Flat over the analysis range: spread stays within ~1.5 nats.
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < white.frequencies_hz.size(); ++k) {
    const double f = white.frequencies_hz[k];
    if (f < 5.0 || f > 30.0) continue;
    lo = std::min(lo, white.log_power[k]);
    hi = std::max(hi, white.log_power[k]);
    CHECK(white.log_power_se[k] > 0.0);
  }
  CHECK(hi - lo < 1.5);

  // A 12.5 Hz tone in noise peaks at its own bin.
  std::vector<std::vector<double>> tonal;
  testutil::Rng rng2(6);
  for (int t = 0; t < 8; ++t) {
    auto w = testutil::tone(3.0, 12.5, fs, 1024,
                            0.3 * static_cast<double>(t));
    const auto noise = testutil::white_noise(rng2, 1024, 0.3);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += noise[i];
    tonal.push_back(std::move(w));
  }
  const PowerSpectrum peaked = mean_log_spectrum(tonal, fs, cfg);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < peaked.frequencies_hz.size(); ++k) {
    if (peaked.log_power[k] > peaked.log_power[peak]) peak = k;
  }
  CHECK(std::abs(peaked.frequencies_hz[peak] - 12.5) <= 0.5);
}

TEST_CASE("mean log spectrum: scaling shifts log power uniformly") {
  testutil::Rng rng(8);
  std::vector<std::vector<double>> windows, doubled;
  for (int t = 0; t < 4; ++t) {
    windows.push_back(testutil::white_noise(rng, 1024));
    doubled.push_back(windows.back());
    for (auto& v : doubled.back()) v *= 2.0;
  }
  const auto base = mean_log_spectrum(windows, 512.0, SpectrumConfig{});
  const auto up = mean_log_spectrum(doubled, 512.0, SpectrumConfig{});
  REQUIRE(base.log_power.size() == up.log_power.size());
  for (std::size_t k = 0; k < base.log_power.size(); ++k) {
    CHECK(up.log_power[k] - base.log_power[k] ==
          doctest::Approx(std::log(4.0)).epsilon(1e-9));
    CHECK(up.log_power_se[k] == doctest::Approx(base.log_power_se[k])
                                    .epsilon(1e-9));
  }
}

TEST_CASE("mean log spectrum input validation") {
  testutil::Rng rng(9);
  std::vector<std::vector<double>> one{testutil::white_noise(rng, 1024)};
  CHECK_THROWS_AS(mean_log_spectrum(one, 512.0, SpectrumConfig{}), InputError);

  std::vector<std::vector<double>> tiny{testutil::white_noise(rng, 100),
                                        testutil::white_noise(rng, 100)};
  CHECK_THROWS_AS(mean_log_spectrum(tiny, 512.0, SpectrumConfig{}), InputError);
}
