#include "erdkit/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "erdkit/errors.hpp"

namespace erdkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Zeroth-order modified Bessel function of the first kind (power series;
// converges in a handful of terms for the beta values used here).
double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double kaiser_beta(double atten_db) {
  if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
  if (atten_db >= 21.0) {
    return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
  }
  return 0.0;
}

std::vector<double> kaiser_window(std::size_t length, double beta) {
  std::vector<double> w(length);
  const double denom = bessel_i0(beta);
  const double m = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double r = (2.0 * n - m) / m;  // -1..1
    w[n] = bessel_i0(beta * std::sqrt(1.0 - r * r)) / denom;
  }
  return w;
}

// Symmetric windowed-sinc band-pass taps for cutoffs (f_lo, f_hi).
std::vector<double> windowed_sinc_bandpass(double f_lo, double f_hi, double fs,
                                           std::size_t length, double beta) {
  const std::vector<double> w = kaiser_window(length, beta);
  std::vector<double> taps(length);
  const double m = static_cast<double>(length - 1) / 2.0;
  auto lowpass = [&](double fc, double n) {
    const double x = n - m;
    const double arg = 2.0 * fc / fs;
    if (x == 0.0) return arg;
    return arg * std::sin(kPi * arg * x) / (kPi * arg * x);
  };
  for (std::size_t n = 0; n < length; ++n) {
    taps[n] = (lowpass(f_hi, static_cast<double>(n)) -
               lowpass(f_lo, static_cast<double>(n))) *
              w[n];
  }
  // Enforce exact symmetry against accumulated rounding differences.
  for (std::size_t n = 0; n < length / 2; ++n) {
    const double avg = 0.5 * (taps[n] + taps[length - 1 - n]);
    taps[n] = avg;
    taps[length - 1 - n] = avg;
  }
  return taps;
}

double magnitude_of(const std::vector<double>& taps, double f_hz, double fs) {
  double re = 0.0;
  double im = 0.0;
  const double w = 2.0 * kPi * f_hz / fs;
  for (std::size_t n = 0; n < taps.size(); ++n) {
    re += taps[n] * std::cos(w * n);
    im -= taps[n] * std::sin(w * n);
  }
  return std::hypot(re, im);
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  internal_check(n > 0 && (n & (n - 1)) == 0, "fft size must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = data[i + k];
        const std::complex<double> v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
  }
}

double BandpassFilter::magnitude_at(double f_hz) const {
  return magnitude_of(taps, f_hz, fs_hz);
}

BandpassFilter design_bandpass(const FrequencyBand& band, double fs_hz,
                               const FilterSpec& spec) {
  validate_band(band, fs_hz);
  if (!(spec.transition_width_hz > 0.0)) {
    throw ConfigError("filter transition width must be positive");
  }
  if (!(spec.stopband_atten_db > 0.0)) {
    throw ConfigError("filter stopband attenuation must be positive");
  }
  // Smallest odd length whose main lobe fits the requested transition.
  std::size_t length =
      static_cast<std::size_t>(std::ceil(fs_hz / spec.transition_width_hz)) + 1;
  if (length % 2 == 0) ++length;
  if (length < 5) length = 5;
  if (static_cast<double>(length) > fs_hz * 30.0) {
    throw ConfigError("filter transition width infeasible at this sample rate");
  }
  const double beta = kaiser_beta(spec.stopband_atten_db);

  // Push cutoffs outward until the response crosses the band edges at the
  // half-power point: adjacent bands of a bank then cross over at -3 dB and
  // their output energies tile the spectrum.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double lo_m = 0.0;
  double hi_m = std::max(4.0 * band.width_hz(), 4.0 * fs_hz / static_cast<double>(length)) + band.width_hz();
  auto edge_gain = [&](double margin) {
    const double f_lo = std::max(band.lo_hz - margin, 0.0);
    const double f_hi = std::min(band.hi_hz + margin, fs_hz / 2.0);
    const auto taps = windowed_sinc_bandpass(f_lo, f_hi, fs_hz, length, beta);
    return 0.5 * (magnitude_of(taps, band.lo_hz, fs_hz) +
                  magnitude_of(taps, band.hi_hz, fs_hz));
  };
  if (edge_gain(hi_m) < inv_sqrt2) {
    throw ConfigError("band-pass design infeasible: band too narrow for fs");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo_m + hi_m);
    if (edge_gain(mid) < inv_sqrt2) {
      lo_m = mid;
    } else {
      hi_m = mid;
    }
  }
  const double margin = 0.5 * (lo_m + hi_m);

  BandpassFilter f;
  f.taps = windowed_sinc_bandpass(std::max(band.lo_hz - margin, 0.0),
                                  std::min(band.hi_hz + margin, fs_hz / 2.0),
                                  fs_hz, length, beta);
  f.band = band;
  f.fs_hz = fs_hz;
  f.requested_transition_hz = spec.transition_width_hz;
  f.stopband_atten_db = spec.stopband_atten_db;
  f.cutoff_margin_hz = margin;

  // Achieved transition width, measured on the realized response: distance
  // from the half-power edge down to the first stopband-level crossing.
  const double floor_gain = std::pow(10.0, -spec.stopband_atten_db / 20.0);
  const double step = 0.01 * fs_hz / static_cast<double>(length);
  double tw = fs_hz / 2.0;
  for (double d = step; band.lo_hz - margin - d > 0.0; d += step) {
    if (f.magnitude_at(band.lo_hz - d) <= floor_gain) {
      tw = d;
      break;
    }
  }
  f.transition_width_hz = tw;
  return f;
}

std::vector<double> apply_filter(const BandpassFilter& filter,
                                 const std::vector<double>& signal,
                                 FilterMode mode) {
  if (signal.empty()) throw InputError("cannot filter an empty signal");
  const std::size_t n = signal.size();
  const std::size_t l = filter.taps.size();
  const std::size_t gd = static_cast<std::size_t>(filter.group_delay_samples());
  std::vector<double> out(n, 0.0);
  if (mode == FilterMode::Causal) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const std::size_t kmax = std::min(l - 1, i);
      for (std::size_t k = 0; k <= kmax; ++k) {
        acc += filter.taps[k] * signal[i - k];
      }
      out[i] = acc;
    }
  } else {
    // Zero-phase: centered convolution (symmetric taps make the phase zero),
    // zero padding beyond both ends.
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < l; ++k) {
        const std::int64_t j =
            static_cast<std::int64_t>(i) + static_cast<std::int64_t>(gd) -
            static_cast<std::int64_t>(k);
        if (j >= 0 && j < static_cast<std::int64_t>(n)) {
          acc += filter.taps[k] * signal[static_cast<std::size_t>(j)];
        }
      }
      out[i] = acc;
    }
  }
  return out;
}

StreamingFir::StreamingFir(const BandpassFilter& filter)
    : taps_(filter.taps),
      history_(filter.taps.size() - 1, 0.0),
      group_delay_(filter.group_delay_samples()) {}

void StreamingFir::reset() {
  std::fill(history_.begin(), history_.end(), 0.0);
}

std::vector<double> StreamingFir::process(const std::vector<double>& chunk) {
  const std::size_t l = taps_.size();
  const std::size_t h = history_.size();  // l - 1
  std::vector<double> out(chunk.size());
  // Work on the concatenation history + chunk so each output sample uses the
  // same fixed-order accumulation as one-shot Causal application.
  std::vector<double> buf;
  buf.reserve(h + chunk.size());
  buf.insert(buf.end(), history_.begin(), history_.end());
  buf.insert(buf.end(), chunk.begin(), chunk.end());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const std::size_t pos = h + i;  // index of the newest sample in buf
    double acc = 0.0;
    for (std::size_t k = 0; k < l; ++k) {
      acc += taps_[k] * buf[pos - k];
    }
    out[i] = acc;
  }
  // Keep the last l-1 inputs.
  if (chunk.size() >= h) {
    std::copy(chunk.end() - static_cast<std::ptrdiff_t>(h), chunk.end(),
              history_.begin());
  } else {
    std::move(history_.begin() + static_cast<std::ptrdiff_t>(chunk.size()),
              history_.end(), history_.begin());
    std::copy(chunk.begin(), chunk.end(),
              history_.end() - static_cast<std::ptrdiff_t>(chunk.size()));
  }
  return out;
}

double window_energy(const std::vector<double>& signal, const SampleRange& span) {
  if (span.length() <= 0) throw InputError("window_energy: empty span");
  if (span.begin < 0 ||
      span.end > static_cast<std::int64_t>(signal.size())) {
    throw InputError("window_energy: span outside signal");
  }
  double acc = 0.0;
  for (std::int64_t i = span.begin; i < span.end; ++i) {
    const double v = signal[static_cast<std::size_t>(i)];
    acc += v * v;
  }
  return acc;
}

double mean_power(const std::vector<double>& signal, const SampleRange& span) {
  return window_energy(signal, span) / static_cast<double>(span.length());
}

namespace {

// One Hann-tapered, zero-padded periodogram accumulated into `acc`.
void accumulate_periodogram(const std::vector<double>& window,
                            std::size_t seg_begin, std::size_t seg_len,
                            std::size_t nfft, std::vector<double>& acc) {
  std::vector<std::complex<double>> buf(nfft, {0.0, 0.0});
  double win_power = 0.0;
  for (std::size_t i = 0; i < seg_len; ++i) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                              static_cast<double>(seg_len)));
    buf[i] = window[seg_begin + i] * w;
    win_power += w * w;
  }
  fft(buf, false);
  const double norm = 1.0 / win_power;
  for (std::size_t b = 0; b < acc.size(); ++b) {
    acc[b] += std::norm(buf[b]) * norm;
  }
}

}  // namespace

PowerSpectrum mean_log_spectrum(const std::vector<std::vector<double>>& windows,
                                double fs_hz, const SpectrumConfig& config) {
  if (windows.size() < 2) {
    throw InputError("mean_log_spectrum needs at least two windows");
  }
  const std::size_t seg_len = static_cast<std::size_t>(
      ms_to_samples(config.segment_seconds * 1000.0, fs_hz));
  const std::size_t nfft =
      next_pow2(seg_len * static_cast<std::size_t>(
                              std::max(config.zero_pad_factor, 1)));
  const std::size_t n_bins = nfft / 2 + 1;
  const std::size_t hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(static_cast<double>(seg_len) *
                                  (1.0 - config.overlap_fraction)));

  std::vector<double> mean(n_bins, 0.0);
  std::vector<double> m2(n_bins, 0.0);  // Welford across windows
  std::size_t count = 0;
  for (const auto& window : windows) {
    if (window.size() < seg_len) {
      throw InputError("spectrum window shorter than the segment length");
    }
    std::vector<double> acc(n_bins, 0.0);
    std::size_t n_segs = 0;
    for (std::size_t b = 0; b + seg_len <= window.size(); b += hop) {
      accumulate_periodogram(window, b, seg_len, nfft, acc);
      ++n_segs;
    }
    ++count;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double p = acc[b] / static_cast<double>(n_segs);
      const double lp = std::log(std::max(p, 1e-300));
      const double delta = lp - mean[b];
      mean[b] += delta / static_cast<double>(count);
      m2[b] += delta * (lp - mean[b]);
    }
  }

  PowerSpectrum s;
  s.n_trials = count;
  s.frequencies_hz.resize(n_bins);
  s.log_power = std::move(mean);
  s.log_power_se.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    s.frequencies_hz[b] = static_cast<double>(b) * fs_hz /
                          static_cast<double>(nfft);
    const double var =
        count > 1 ? m2[b] / static_cast<double>(count - 1) : 0.0;
    s.log_power_se[b] = std::sqrt(var / static_cast<double>(count));
  }
  return s;
}

}  // namespace erdkit
