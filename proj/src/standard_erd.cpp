#include "erdkit/standard_erd.hpp"

#include <algorithm>
#include <cmath>

#include "erdkit/artifact.hpp"
#include "erdkit/errors.hpp"

namespace erdkit {

std::string PeriodPair::name() const {
  return to_string(reference) + to_string(active);
}

std::array<PeriodPair, 6> all_period_pairs() {
  using K = PeriodKind;
  return {{{K::R1, K::A1},
           {K::R1, K::A2},
           {K::R1, K::A3},
           {K::R2, K::A1},
           {K::R2, K::A2},
           {K::R2, K::A3}}};
}

IndividualBand select_individual_band(
    const std::vector<std::vector<double>>& reference_windows,
    const std::vector<std::vector<double>>& active_windows, double fs_hz,
    const AnalysisConfig& config) {
  const auto min_trials =
      static_cast<std::size_t>(config.standard.min_trials_for_selection);
  if (reference_windows.size() < min_trials ||
      active_windows.size() < min_trials) {
    throw InsufficientDataError(
        "band selection needs at least " + std::to_string(min_trials) +
        " windows per period, got " + std::to_string(reference_windows.size()) +
        " reference / " + std::to_string(active_windows.size()) + " active");
  }
  SpectrumConfig sc;
  const PowerSpectrum ref = mean_log_spectrum(reference_windows, fs_hz, sc);
  const PowerSpectrum act = mean_log_spectrum(active_windows, fs_hz, sc);
  internal_check(ref.frequencies_hz == act.frequencies_hz,
                 "spectra must share one frequency grid");

  // Restrict to the configured search range.
  const double eps = 1e-9;
  std::vector<std::size_t> bins;
  for (std::size_t b = 0; b < ref.frequencies_hz.size(); ++b) {
    const double f = ref.frequencies_hz[b];
    if (f >= config.bands.range_lo_hz - eps &&
        f <= config.bands.range_hi_hz + eps) {
      bins.push_back(b);
    }
  }
  if (bins.size() < 2) {
    throw InsufficientDataError("spectral grid has no bins inside the band range");
  }

  IndividualBand out;
  for (std::size_t b : bins) {
    out.bin_frequency_hz.push_back(ref.frequencies_hz[b]);
    out.bin_difference.push_back(ref.log_power[b] - act.log_power[b]);
    out.bin_bound.push_back(
        1.96 * std::sqrt(ref.log_power_se[b] * ref.log_power_se[b] +
                         act.log_power_se[b] * act.log_power_se[b]));
  }

  // Sliding window of the configured width over the in-range grid; a window
  // covers the half-open band [f0, f0 + width).
  const double bin_width = ref.bin_width_hz();
  const auto per_window = static_cast<std::size_t>(
      std::llround(config.bands.width_hz / bin_width));
  internal_check(per_window >= 1, "band width below the spectral resolution");
  if (bins.size() < per_window) {
    throw InsufficientDataError("band range narrower than one analysis band");
  }

  bool found = false;
  double best_score = 0.0;
  std::size_t best_start = 0;
  for (std::size_t s = 0; s + per_window <= out.bin_frequency_hz.size(); ++s) {
    // The band must fit inside the range: [f0, f0 + width].
    if (out.bin_frequency_hz[s] + config.bands.width_hz >
        config.bands.range_hi_hz + eps) {
      break;
    }
    bool all_significant = true;
    double score = 0.0;
    for (std::size_t k = 0; k < per_window; ++k) {
      const double d = out.bin_difference[s + k];
      const double bound = out.bin_bound[s + k];
      if (!(d > 0.0) || !(d > bound)) {
        all_significant = false;
        break;
      }
      score += d;
    }
    if (!all_significant) continue;
    score /= static_cast<double>(per_window);
    if (!found || score > best_score) {
      found = true;
      best_score = score;
      best_start = s;
    }
  }
  if (!found) {
    throw NoReactiveBandError(
        "no band in range has a significant reference-minus-active drop");
  }
  const double f0 = out.bin_frequency_hz[best_start];
  out.band = FrequencyBand{f0, f0 + config.bands.width_hz};
  out.center_hz = out.band.center_hz();
  out.mean_difference = best_score;
  out.fallback = false;
  return out;
}

PairChannelResult erd_for_pair(const Recording& recording,
                               const TrialSet& trials,
                               const std::vector<bool>& valid_mask,
                               const FrequencyBand& band,
                               const PeriodPair& pair,
                               const std::string& channel,
                               const AnalysisConfig& config) {
  internal_check(valid_mask.size() == trials.trials.size(),
                 "validity mask must be parallel to the trial list");
  PairChannelResult result;
  result.pair = pair;
  result.channel = channel;
  result.band.band = band;
  result.band.center_hz = band.center_hz();

  const BandpassFilter filter =
      design_bandpass(band, recording.fs_hz, config.filters.standard);
  const std::int64_t pad = filter.group_delay_samples();
  const std::vector<double>& samples =
      recording.channels[recording.channel_index(channel)];
  const auto n = static_cast<std::int64_t>(samples.size());

  double sum_ref_power = 0.0;
  double sum_act_power = 0.0;
  std::int64_t n_power = 0;
  std::vector<double> identified_values;
  std::size_t n_identified = 0;

  for (std::size_t t = 0; t < trials.trials.size(); ++t) {
    if (!valid_mask[t]) continue;
    const Trial& trial = trials.trials[t];
    const SampleRange ref =
        period_bounds(trial, pair.reference, config.timing, recording.fs_hz, n);
    const SampleRange act =
        period_bounds(trial, pair.active, config.timing, recording.fs_hz, n);

    // Zero-phase filter a local segment wide enough that every window sample
    // sees its full two-sided support; results match whole-record filtering.
    const std::int64_t seg_begin =
        std::max<std::int64_t>(0, std::min(ref.begin, act.begin) - pad);
    const std::int64_t seg_end =
        std::min<std::int64_t>(n, std::max(ref.end, act.end) + pad);
    std::vector<double> segment(samples.begin() + seg_begin,
                                samples.begin() + seg_end);
    const std::vector<double> filtered =
        apply_filter(filter, segment, FilterMode::ZeroPhase);
    const double ref_power = mean_power(
        filtered, {ref.begin - seg_begin, ref.end - seg_begin});
    const double act_power = mean_power(
        filtered, {act.begin - seg_begin, act.end - seg_begin});

    sum_ref_power += ref_power;
    sum_act_power += act_power;
    ++n_power;
    ++result.n_valid_trials;

    if (ref_power <= 0.0) {
      ++result.n_excluded_zero_reference;
      continue;
    }
    const ErdMeasure m = erd_percent(act_power, ref_power);
    result.per_trial.push_back(m);
    result.trial_indices.push_back(static_cast<std::int64_t>(t));
    if (m.identified(config.identification_threshold_percent)) {
      ++n_identified;
      identified_values.push_back(m.percent());
    }
  }

  if (result.n_valid_trials > 0) {
    const auto usable = result.per_trial.size();
    result.identification_pct =
        usable == 0 ? 0.0
                    : 100.0 * static_cast<double>(n_identified) /
                          static_cast<double>(usable);
  }
  if (!identified_values.empty()) {
    double mean = 0.0;
    for (double v : identified_values) mean += v;
    mean /= static_cast<double>(identified_values.size());
    result.mean_identified = mean;
    if (identified_values.size() >= 2) {
      double ss = 0.0;
      for (double v : identified_values) ss += (v - mean) * (v - mean);
      result.std_identified =
          std::sqrt(ss / static_cast<double>(identified_values.size() - 1));
    } else {
      result.std_identified = 0.0;
    }
  }
  if (n_power > 0 && sum_ref_power > 0.0) {
    result.average_trial_erd_percent =
        erd_percent(sum_act_power / static_cast<double>(n_power),
                    sum_ref_power / static_cast<double>(n_power))
            .percent();
  }
  return result;
}

StandardRunResult run_standard(const Recording& recording,
                               const TrialSet& trials,
                               const AnalysisConfig& config) {
  config.timing.validate();
  StandardRunResult result;
  result.n_trials_total = static_cast<std::int64_t>(trials.trials.size());

  // Working copy restricted to the analyzed channels, artifact-suppressed.
  Recording working;
  working.fs_hz = recording.fs_hz;
  working.triggers = recording.triggers;
  std::vector<std::vector<ArtifactSpan>> channel_spans;
  for (const auto& label : config.standard.channels) {
    const auto& raw = recording.channels[recording.channel_index(label)];
    SuppressionResult sup =
        detect_and_suppress(raw, config.artifact, recording.fs_hz);
    working.labels.push_back(label);
    working.channels.push_back(std::move(sup.cleaned));
    channel_spans.push_back(std::move(sup.spans));
  }
  const std::int64_t n = working.n_samples();

  // A trial stays valid only if no suppressed span on any analyzed channel
  // overlaps any of its analysis windows.
  std::vector<bool> valid_mask(trials.trials.size(), false);
  for (std::size_t t = 0; t < trials.trials.size(); ++t) {
    const Trial& trial = trials.trials[t];
    if (!trial.valid) continue;
    const auto windows =
        analysis_windows(trial, true, config.timing, working.fs_hz, n);
    bool clean = true;
    for (const auto& spans : channel_spans) {
      for (const auto& s : spans) {
        for (const auto& w : windows) {
          if (s.span.overlaps(w)) {
            clean = false;
            break;
          }
        }
        if (!clean) break;
      }
      if (!clean) break;
    }
    valid_mask[t] = clean;
    if (trial.valid && !clean) ++result.n_excluded_artifact;
  }
  for (bool v : valid_mask) result.n_trials_analyzed += v ? 1 : 0;

  const std::int64_t window_len = ms_to_samples(1000.0, working.fs_hz);
  for (const PeriodPair& pair : all_period_pairs()) {
    for (std::size_t c = 0; c < config.standard.channels.size(); ++c) {
      const std::string& label = config.standard.channels[c];
      const auto& samples = working.channels[c];

      std::vector<std::vector<double>> ref_windows;
      std::vector<std::vector<double>> act_windows;
      for (std::size_t t = 0; t < trials.trials.size(); ++t) {
        if (!valid_mask[t]) continue;
        const SampleRange ref = period_bounds(trials.trials[t], pair.reference,
                                              config.timing, working.fs_hz, n);
        const SampleRange act = period_bounds(trials.trials[t], pair.active,
                                              config.timing, working.fs_hz, n);
        internal_check(ref.length() == window_len && act.length() == window_len,
                       "standard analysis windows must be one second long");
        ref_windows.emplace_back(samples.begin() + ref.begin,
                                 samples.begin() + ref.end);
        act_windows.emplace_back(samples.begin() + act.begin,
                                 samples.begin() + act.end);
      }

      IndividualBand band;
      try {
        band = select_individual_band(ref_windows, act_windows, working.fs_hz,
                                      config);
      } catch (const InsufficientDataError&) {
        band.band = config.bands.reporting_band;
        band.center_hz = band.band.center_hz();
        band.fallback = true;
      } catch (const NoReactiveBandError&) {
        band.band = config.bands.reporting_band;
        band.center_hz = band.band.center_hz();
        band.fallback = true;
      }

      PairChannelResult cell = erd_for_pair(working, trials, valid_mask,
                                            band.band, pair, label, config);
      cell.band = band;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace erdkit
