#include "erdkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "erdkit/artifact.hpp"
#include "erdkit/errors.hpp"
#include "erdkit/novel_erd.hpp"
#include "erdkit/standard_erd.hpp"

namespace erdkit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  internal_check(!v.empty(), "median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

std::int64_t fft_macs(std::int64_t m) {
  std::int64_t log2m = 0;
  while ((std::int64_t{1} << log2m) < m) ++log2m;
  return 2 * m * log2m;
}

}  // namespace

BenchResult run_bench(const Recording& recording, const TrialSet& trials,
                      const AnalysisConfig& config) {
  if (config.bench.repetitions < 3) {
    throw ConfigError("bench.repetitions must be at least 3");
  }
  BenchResult result;
  result.repetitions = config.bench.repetitions;

  std::vector<std::size_t> usable;
  for (std::size_t t = 0; t < trials.trials.size(); ++t) {
    if (trials.trials[t].valid) usable.push_back(t);
  }
  if (usable.empty()) throw InputError("bench needs at least one valid trial");
  result.n_trials = static_cast<std::int64_t>(usable.size());
  const auto n_valid = static_cast<double>(usable.size());
  std::vector<bool> valid_mask(trials.trials.size(), false);
  for (std::size_t t : usable) valid_mask[t] = true;

  const double fs = recording.fs_hz;
  const std::int64_t n = recording.n_samples();
  const std::int64_t window = ms_to_samples(1000.0, fs);
  const std::int64_t half = ms_to_samples(config.timing.post_trigger_ms / 3.0, fs);

  const BandpassFilter std_filter = design_bandpass(
      config.bands.reporting_band, fs, config.filters.standard);
  const auto bank =
      enumerate_bands(config.bands.range_lo_hz, config.bands.range_hi_hz,
                      config.bands.width_hz, config.bands.hop_hz());
  std::vector<BandpassFilter> novel_filters;
  for (const auto& band : bank) {
    novel_filters.push_back(design_bandpass(band, fs, config.filters.novel));
  }
  const auto l_std = static_cast<std::int64_t>(std_filter.taps.size());
  const auto l_nov = static_cast<std::int64_t>(novel_filters.front().taps.size());
  const std::int64_t pad = std_filter.group_delay_samples();
  const std::int64_t gd_nov = novel_filters.front().group_delay_samples();
  const auto n_pairs = static_cast<std::int64_t>(config.differential_pairs.size());
  const auto n_bands = static_cast<std::int64_t>(bank.size());
  result.standard.filter_length = l_std;
  result.novel.filter_length = l_nov;
  result.standard.filter_group_delay_ms = std_filter.group_delay_ms();
  result.novel.filter_group_delay_ms = novel_filters.front().group_delay_ms();

  // ---- Analytic multiply-accumulate counts (cost model in the header). ----
  const auto nfft = static_cast<std::int64_t>(next_pow2(
      static_cast<std::size_t>(window) *
      static_cast<std::size_t>(SpectrumConfig{}.zero_pad_factor)));
  std::int64_t std_total = 0;
  for (std::size_t t : usable) {
    for (const PeriodPair& pair : all_period_pairs()) {
      const SampleRange ref =
          period_bounds(trials.trials[t], pair.reference, config.timing, fs, n);
      const SampleRange act =
          period_bounds(trials.trials[t], pair.active, config.timing, fs, n);
      const std::int64_t seg_begin =
          std::max<std::int64_t>(0, std::min(ref.begin, act.begin) - pad);
      const std::int64_t seg_end =
          std::min<std::int64_t>(n, std::max(ref.end, act.end) + pad);
      const std::int64_t span = seg_end - seg_begin;
      // Per channel: zero-phase convolution, then squares over both windows,
      // plus the two Welch segments feeding band selection.
      const std::int64_t per_channel =
          span * l_std + 2 * window + 2 * (fft_macs(nfft) + nfft);
      std_total +=
          per_channel * static_cast<std::int64_t>(config.standard.channels.size());
    }
  }
  result.standard.macs_per_trial =
      std_total / static_cast<std::int64_t>(usable.size());

  std::int64_t nov_total = 0;
  for (std::size_t t : usable) {
    const SampleRange pre = period_bounds(trials.trials[t], PeriodKind::PreTrigger,
                                          config.timing, fs, n);
    const SampleRange reaction = period_bounds(
        trials.trials[t], PeriodKind::ReactionTime, config.timing, fs, n);
    const std::int64_t warm_start = std::max<std::int64_t>(0, pre.begin - l_nov);
    const std::int64_t chunk = reaction.end + gd_nov - warm_start;
    nov_total += n_pairs * n_bands * (chunk * l_nov + 5 * half);
  }
  result.novel.macs_per_trial =
      nov_total / static_cast<std::int64_t>(usable.size());
  // Marginal cost of one 500 ms decision update across the montage and bank.
  result.novel_macs_per_interval = n_pairs * n_bands * half * (l_nov + 1);

  // ---- Wall-clock stages, median across repetitions (single-threaded). ----
  std::vector<double> t_suppress_std, t_select, t_erd;
  std::vector<double> t_suppress_nov, t_diff, t_stream, t_decide;
  for (int rep = 0; rep < config.bench.repetitions; ++rep) {
    // Standard: suppression on the analyzed channels.
    auto t0 = Clock::now();
    Recording working;
    working.fs_hz = fs;
    working.triggers = recording.triggers;
    for (const auto& label : config.standard.channels) {
      const auto& raw = recording.channels[recording.channel_index(label)];
      SuppressionResult sup = detect_and_suppress(raw, config.artifact, fs);
      working.labels.push_back(label);
      working.channels.push_back(std::move(sup.cleaned));
    }
    t_suppress_std.push_back(ms_since(t0) / n_valid);

    // Standard: band selection per cell.
    t0 = Clock::now();
    std::vector<IndividualBand> bands_per_cell;
    for (const PeriodPair& pair : all_period_pairs()) {
      for (std::size_t c = 0; c < config.standard.channels.size(); ++c) {
        const auto& samples = working.channels[c];
        std::vector<std::vector<double>> ref_windows, act_windows;
        for (std::size_t t : usable) {
          const SampleRange ref = period_bounds(trials.trials[t], pair.reference,
                                                config.timing, fs, n);
          const SampleRange act = period_bounds(trials.trials[t], pair.active,
                                                config.timing, fs, n);
          ref_windows.emplace_back(samples.begin() + ref.begin,
                                   samples.begin() + ref.end);
          act_windows.emplace_back(samples.begin() + act.begin,
                                   samples.begin() + act.end);
        }
        IndividualBand band;
        try {
          band = select_individual_band(ref_windows, act_windows, fs, config);
        } catch (const InputError&) {
          band.band = config.bands.reporting_band;
          band.center_hz = band.band.center_hz();
          band.fallback = true;
        }
        bands_per_cell.push_back(std::move(band));
      }
    }
    t_select.push_back(ms_since(t0) / n_valid);

    // Standard: filter + square + window means.
    t0 = Clock::now();
    std::size_t cell = 0;
    for (const PeriodPair& pair : all_period_pairs()) {
      for (const auto& label : config.standard.channels) {
        erd_for_pair(working, trials, valid_mask, bands_per_cell[cell].band,
                     pair, label, config);
        ++cell;
      }
    }
    t_erd.push_back(ms_since(t0) / n_valid);

    // Streaming: suppression on every electrode feeding a differential.
    t0 = Clock::now();
    Recording cleaned = recording;
    {
      std::vector<bool> used(cleaned.channels.size(), false);
      for (const auto& pair : config.differential_pairs) {
        used[cleaned.channel_index(pair.pos)] = true;
        used[cleaned.channel_index(pair.neg)] = true;
      }
      for (std::size_t c = 0; c < cleaned.channels.size(); ++c) {
        if (!used[c]) continue;
        SuppressionResult sup =
            detect_and_suppress(cleaned.channels[c], config.artifact, fs);
        cleaned.channels[c] = std::move(sup.cleaned);
      }
    }
    t_suppress_nov.push_back(ms_since(t0) / n_valid);

    t0 = Clock::now();
    const auto differentials =
        build_differentials(cleaned, config.differential_pairs, config.montage,
                            config.strict_pair_adjacency);
    t_diff.push_back(ms_since(t0) / n_valid);

    t0 = Clock::now();
    std::vector<RatioProfile> profiles;
    profiles.reserve(usable.size());
    for (std::size_t t : usable) {
      profiles.push_back(ratio_profile(trials.trials[t], differentials, bank,
                                       novel_filters, config.timing, fs, n));
    }
    t_stream.push_back(ms_since(t0) / n_valid);

    t0 = Clock::now();
    const double threshold_ratio =
        1.0 - config.identification_threshold_percent / 100.0;
    for (const auto& profile : profiles) {
      group_identify(profile, config.differential_pairs, bank.size(),
                     threshold_ratio);
    }
    t_decide.push_back(ms_since(t0) / n_valid);
  }

  result.standard.stages = {{"artifact_suppression", median(t_suppress_std)},
                            {"band_selection", median(t_select)},
                            {"filter_square_average", median(t_erd)}};
  result.novel.stages = {{"artifact_suppression", median(t_suppress_nov)},
                         {"differentials", median(t_diff)},
                         {"stream_filter_energy", median(t_stream)},
                         {"group_decision", median(t_decide)}};
  for (const auto& s : result.standard.stages) {
    result.standard.total_ms_per_trial += s.median_ms_per_trial;
  }
  for (const auto& s : result.novel.stages) {
    result.novel.total_ms_per_trial += s.median_ms_per_trial;
  }

  // Decision latency: intrinsic filter delay plus the measured compute for
  // the unit that produces one decision (full trial offline; one 500 ms
  // interval update plus one transition's group means online).
  result.standard.decision_latency_ms =
      result.standard.filter_group_delay_ms + result.standard.total_ms_per_trial;
  result.novel.decision_latency_ms =
      result.novel.filter_group_delay_ms + median(t_stream) / 5.0 +
      median(t_decide) / static_cast<double>(kNumTransitions);
  return result;
}

std::string bench_to_json(const BenchResult& result) {
  nlohmann::json doc;
  auto method = [](const BenchResult::Method& m) {
    nlohmann::json j;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : m.stages) {
      j["stages"].push_back(
          {{"name", s.name}, {"median_ms_per_trial", s.median_ms_per_trial}});
    }
    j["total_ms_per_trial"] = m.total_ms_per_trial;
    j["filter_group_delay_ms"] = m.filter_group_delay_ms;
    j["decision_latency_ms"] = m.decision_latency_ms;
    j["macs_per_trial"] = m.macs_per_trial;
    j["filter_length"] = m.filter_length;
    return j;
  };
  doc["standard"] = method(result.standard);
  doc["novel"] = method(result.novel);
  doc["novel_macs_per_interval"] = result.novel_macs_per_interval;
  doc["repetitions"] = result.repetitions;
  doc["n_trials"] = result.n_trials;
  return doc.dump(2) + "\n";
}

}  // namespace erdkit
