#include "erdkit/novel_erd.hpp"

#include <algorithm>
#include <cmath>

#include "erdkit/artifact.hpp"
#include "erdkit/errors.hpp"

namespace erdkit {

std::vector<DifferentialChannel> build_differentials(
    const Recording& recording, const std::vector<DifferentialPair>& pairs,
    const Montage& montage, bool strict) {
  validate_pairs(montage, pairs, strict);
  std::vector<DifferentialChannel> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const auto& pos = recording.channels[recording.channel_index(pair.pos)];
    const auto& neg = recording.channels[recording.channel_index(pair.neg)];
    DifferentialChannel d;
    d.pair = pair;
    d.samples.resize(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      d.samples[i] = pos[i] - neg[i];
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::array<std::string, kNumTransitions> transition_labels() {
  return {"-1.5 s", "-1 s", "-0.5 s", "onset"};
}

RatioProfile ratio_profile(const Trial& trial,
                           const std::vector<DifferentialChannel>& differentials,
                           const std::vector<FrequencyBand>& bank,
                           const std::vector<BandpassFilter>& filters,
                           const TrialTiming& timing, double fs_hz,
                           std::int64_t recording_length) {
  internal_check(bank.size() == filters.size(),
                 "band bank and filter bank must be parallel");
  const std::array<PeriodKind, 5> sequence = {
      PeriodKind::PreTrigger, PeriodKind::Post1, PeriodKind::Post2,
      PeriodKind::Post3, PeriodKind::ReactionTime};
  std::array<SampleRange, 5> intervals;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    intervals[i] =
        period_bounds(trial, sequence[i], timing, fs_hz, recording_length);
  }

  RatioProfile profile;
  profile.per_channel_band.assign(
      differentials.size(),
      std::vector<TransitionRatios>(bank.size()));

  for (std::size_t b = 0; b < filters.size(); ++b) {
    const BandpassFilter& filter = filters[b];
    const auto length = static_cast<std::int64_t>(filter.taps.size());
    const std::int64_t gd = filter.group_delay_samples();
    // Online contract: interval [a, b) is measured on causal output samples
    // [a+gd, b+gd). Warm up from one filter length before the first interval
    // so every measured output is past the stream-start transient.
    const std::int64_t warm_start =
        std::max<std::int64_t>(0, intervals[0].begin - length);
    const std::int64_t need_end = intervals[4].end + gd;
    if (need_end > recording_length) {
      throw InputError(
          "trial ends too close to the recording end for the causal path");
    }

    for (std::size_t d = 0; d < differentials.size(); ++d) {
      const auto& samples = differentials[d].samples;
      StreamingFir fir(filter);
      const std::vector<double> chunk(samples.begin() + warm_start,
                                      samples.begin() + need_end);
      const std::vector<double> filtered = fir.process(chunk);

      std::array<double, 5> energy{};
      for (std::size_t i = 0; i < intervals.size(); ++i) {
        const std::int64_t a = intervals[i].begin + gd - warm_start;
        const std::int64_t e = intervals[i].end + gd - warm_start;
        energy[i] = window_energy(filtered, {a, e});
        if (b == 0 && d == 0) {
          // Analytic per-interval cost over the whole bank and montage; the
          // multiply below restores both factors.
          profile.interval_energy_macs[i] +=
              intervals[i].length() *
              (length + 1) *
              static_cast<std::int64_t>(differentials.size() * bank.size());
        }
      }
      TransitionRatios& tr = profile.per_channel_band[d][b];
      for (int t = 0; t < kNumTransitions; ++t) {
        const double denom = energy[static_cast<std::size_t>(t)];
        const double numer = energy[static_cast<std::size_t>(t) + 1];
        if (denom > 0.0) tr.ratio[static_cast<std::size_t>(t)] = numer / denom;
      }
    }
  }
  return profile;
}

TrialGroupDecisions group_identify(const RatioProfile& profile,
                                   const std::vector<DifferentialPair>& pairs,
                                   std::size_t n_bands, double threshold_ratio) {
  internal_check(profile.per_channel_band.size() == pairs.size(),
                 "profile and pair list must be parallel");
  TrialGroupDecisions out;
  out.decisions.resize(n_bands);
  for (std::size_t b = 0; b < n_bands; ++b) {
    for (int t = 0; t < kNumTransitions; ++t) {
      std::array<double, 3> sum{};
      std::array<int, 3> count{};
      for (std::size_t d = 0; d < pairs.size(); ++d) {
        const auto& ratio = profile.per_channel_band[d][b].ratio;
        const auto& r = ratio[static_cast<std::size_t>(t)];
        if (!r) continue;
        const auto g = static_cast<std::size_t>(pairs[d].group);
        sum[g] += *r;
        ++count[g];
      }
      for (std::size_t g = 0; g < 3; ++g) {
        GroupDecision& dec =
            out.decisions[b][static_cast<std::size_t>(t)][g];
        if (count[g] > 0) {
          const double mean = sum[g] / count[g];
          dec.mean_ratio = mean;
          dec.identified = mean < threshold_ratio;
          dec.mean_erd_percent = (mean - 1.0) * 100.0;
        }
      }
    }
  }
  return out;
}

NovelRunResult run_novel(const Recording& recording, const TrialSet& trials,
                         const AnalysisConfig& config) {
  config.timing.validate();
  NovelRunResult result;
  result.n_trials_total = static_cast<std::int64_t>(trials.trials.size());
  result.bank =
      enumerate_bands(config.bands.range_lo_hz, config.bands.range_hi_hz,
                      config.bands.width_hz, config.bands.hop_hz());
  bool reporting_found = false;
  for (std::size_t b = 0; b < result.bank.size(); ++b) {
    if (result.bank[b] == config.bands.reporting_band) {
      result.reporting_band_index = b;
      reporting_found = true;
    }
  }
  if (!reporting_found) {
    throw ConfigError("bands.reporting_band must be one of the analysis bands");
  }

  // Artifact suppression on every electrode feeding a differential.
  Recording working = recording;
  std::vector<std::vector<ArtifactSpan>> channel_spans(working.channels.size());
  {
    std::vector<bool> used(working.channels.size(), false);
    for (const auto& pair : config.differential_pairs) {
      used[working.channel_index(pair.pos)] = true;
      used[working.channel_index(pair.neg)] = true;
    }
    for (std::size_t c = 0; c < working.channels.size(); ++c) {
      if (!used[c]) continue;
      SuppressionResult sup = detect_and_suppress(
          working.channels[c], config.artifact, working.fs_hz);
      working.channels[c] = std::move(sup.cleaned);
      channel_spans[c] = std::move(sup.spans);
    }
  }
  const std::int64_t n = working.n_samples();

  std::vector<bool> valid_mask(trials.trials.size(), false);
  for (std::size_t t = 0; t < trials.trials.size(); ++t) {
    const Trial& trial = trials.trials[t];
    if (!trial.valid) continue;
    const auto windows =
        analysis_windows(trial, false, config.timing, working.fs_hz, n);
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
    if (!clean) ++result.n_excluded_artifact;
  }

  const auto differentials =
      build_differentials(working, config.differential_pairs, config.montage,
                          config.strict_pair_adjacency);
  std::vector<BandpassFilter> filters;
  filters.reserve(result.bank.size());
  for (const auto& band : result.bank) {
    filters.push_back(design_bandpass(band, working.fs_hz, config.filters.novel));
  }
  result.filter_group_delay_ms = filters.front().group_delay_ms();
  const double threshold_ratio =
      1.0 - config.identification_threshold_percent / 100.0;

  // Accumulators per [band][transition*3+group].
  struct Acc {
    std::int64_t evaluable = 0;
    std::vector<double> identified_erd;
  };
  std::vector<std::vector<Acc>> acc(
      result.bank.size(), std::vector<Acc>(kNumTransitions * 3));

  for (std::size_t t = 0; t < trials.trials.size(); ++t) {
    if (!valid_mask[t]) continue;
    ++result.n_trials_analyzed;
    const RatioProfile profile =
        ratio_profile(trials.trials[t], differentials, result.bank, filters,
                      config.timing, working.fs_hz, n);
    const TrialGroupDecisions decisions = group_identify(
        profile, config.differential_pairs, result.bank.size(), threshold_ratio);
    result.analyzed_trial_indices.push_back(static_cast<std::int64_t>(t));
    result.reporting_first_transition.push_back(
        decisions.decisions[result.reporting_band_index][0]);
    for (std::size_t b = 0; b < result.bank.size(); ++b) {
      for (int tr = 0; tr < kNumTransitions; ++tr) {
        for (std::size_t g = 0; g < 3; ++g) {
          const GroupDecision& dec =
              decisions.decisions[b][static_cast<std::size_t>(tr)][g];
          if (!dec.mean_ratio) continue;
          Acc& a = acc[b][static_cast<std::size_t>(tr) * 3 + g];
          ++a.evaluable;
          if (dec.identified) a.identified_erd.push_back(dec.mean_erd_percent);
        }
      }
    }
  }

  result.cells.assign(result.bank.size(), {});
  for (std::size_t b = 0; b < result.bank.size(); ++b) {
    result.cells[b].resize(kNumTransitions * 3);
    for (int tr = 0; tr < kNumTransitions; ++tr) {
      for (std::size_t g = 0; g < 3; ++g) {
        const Acc& a = acc[b][static_cast<std::size_t>(tr) * 3 + g];
        NovelCell& cell = result.cells[b][static_cast<std::size_t>(tr) * 3 + g];
        cell.transition = tr;
        cell.group = static_cast<PairGroup>(g);
        cell.n_evaluable_trials = a.evaluable;
        if (a.evaluable > 0) {
          cell.identification_pct =
              100.0 * static_cast<double>(a.identified_erd.size()) /
              static_cast<double>(a.evaluable);
        }
        if (!a.identified_erd.empty()) {
          double mean = 0.0;
          for (double v : a.identified_erd) mean += v;
          mean /= static_cast<double>(a.identified_erd.size());
          cell.mean_identified = mean;
          if (a.identified_erd.size() >= 2) {
            double ss = 0.0;
            for (double v : a.identified_erd) ss += (v - mean) * (v - mean);
            cell.std_identified = std::sqrt(
                ss / static_cast<double>(a.identified_erd.size() - 1));
          } else {
            cell.std_identified = 0.0;
          }
        }
      }
    }
  }
  return result;
}

}  // namespace erdkit
