#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "erdkit/bands.hpp"
#include "erdkit/timing.hpp"

namespace erdkit {

// ---------------------------------------------------------------------------
// FFT (iterative radix-2, power-of-two sizes)
// ---------------------------------------------------------------------------

std::size_t next_pow2(std::size_t n);

// In-place forward (inverse=false) or inverse (inverse=true, 1/N scaled)
// transform. data.size() must be a power of two.
void fft(std::vector<std::complex<double>>& data, bool inverse);

// ---------------------------------------------------------------------------
// FIR band-pass design
// ---------------------------------------------------------------------------

struct FilterSpec {
  double transition_width_hz = 1.0;
  double stopband_atten_db = 40.0;
};

// Linear-phase windowed-sinc band-pass (Kaiser window). Odd tap count L,
// exactly symmetric taps, group delay (L-1)/2 samples. A single margin pushes
// both cutoffs outward from the band edges until the mean of the two edge
// gains is exactly 1/sqrt(2); the edges straddle that half-power point
// symmetrically (they differ from it only through the residual asymmetry of
// the realized response, ~5e-6 at 513 taps, ~3e-3 at 65 taps for a 2 Hz
// band). Adjacent bands of a bank therefore cross over at half power and
// their energies partition the spectrum.
struct BandpassFilter {
  std::vector<double> taps;  // symmetric, odd length
  FrequencyBand band;
  double fs_hz = 0.0;
  double transition_width_hz = 0.0;   // achieved (measured on the response)
  double requested_transition_hz = 0.0;
  double stopband_atten_db = 0.0;     // design target
  double cutoff_margin_hz = 0.0;      // solved half-power margin

  std::int64_t group_delay_samples() const {
    return static_cast<std::int64_t>(taps.size() - 1) / 2;
  }
  double group_delay_ms() const {
    return samples_to_ms(group_delay_samples(), fs_hz);
  }
  // |H(f)| of the tap sequence at one frequency.
  double magnitude_at(double f_hz) const;
};

// Throws ConfigError when the band or transition is infeasible at fs.
BandpassFilter design_bandpass(const FrequencyBand& band, double fs_hz,
                               const FilterSpec& spec);

// ---------------------------------------------------------------------------
// Filter application
// ---------------------------------------------------------------------------

enum class FilterMode {
  Causal,    // streaming convolution; output delayed by the group delay
  ZeroPhase, // delay-compensated offline mode (zero padding at both ends)
};

// Same-length output. Causal: y[n] = sum_k taps[k] * x[n-k], x[<0] = 0.
// ZeroPhase: the causal output advanced by the group delay (symmetric taps
// make this exact zero-phase), zero-padded at the tail.
std::vector<double> apply_filter(const BandpassFilter& filter,
                                 const std::vector<double>& signal,
                                 FilterMode mode);

// Incremental causal convolution with explicit state, for the streaming
// pipeline and its causality contract: feeding a signal in any chunking
// yields bit-identical output to one-shot Causal application.
class StreamingFir {
 public:
  explicit StreamingFir(const BandpassFilter& filter);

  // Processes one chunk, appending len(chunk) output samples.
  std::vector<double> process(const std::vector<double>& chunk);
  void reset();
  std::int64_t group_delay_samples() const { return group_delay_; }

 private:
  std::vector<double> taps_;
  std::vector<double> history_;  // last L-1 inputs, oldest first
  std::int64_t group_delay_;
};

// ---------------------------------------------------------------------------
// Energy and spectra
// ---------------------------------------------------------------------------

// Sum of squared samples over [span.begin, span.end). Throws InputError on an
// empty span or a span outside the signal.
double window_energy(const std::vector<double>& signal, const SampleRange& span);

// Mean of squared samples (window_energy / length).
double mean_power(const std::vector<double>& signal, const SampleRange& span);

struct SpectrumConfig {
  double segment_seconds = 1.0;  // Hann-tapered Welch segments
  double overlap_fraction = 0.5;
  int zero_pad_factor = 2;       // 1 s at 512 Hz -> 0.5 Hz grid
};

// Mean log power spectrum across trials with per-bin dispersion.
struct PowerSpectrum {
  std::vector<double> frequencies_hz;   // ascending, uniform grid
  std::vector<double> log_power;        // natural log of mean squared magnitude
  std::vector<double> log_power_se;     // across-trial standard error per bin
  std::size_t n_trials = 0;

  double bin_width_hz() const {
    return frequencies_hz.size() > 1 ? frequencies_hz[1] - frequencies_hz[0]
                                     : 0.0;
  }
};

// Per-window Welch periodogram (Hann segments, averaged), log-transformed,
// averaged across windows; per-bin standard error across windows retained.
// Requires >= 2 windows, each at least one segment long. Throws InputError.
PowerSpectrum mean_log_spectrum(const std::vector<std::vector<double>>& windows,
                                double fs_hz, const SpectrumConfig& config);

}  // namespace erdkit
