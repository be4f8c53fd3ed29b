#include "erdkit/compare.hpp"

#include <map>

#include "erdkit/errors.hpp"

namespace erdkit {

DetectionReport run_comparison(const Recording& recording,
                               const TrialSet& trials,
                               const AnalysisConfig& config) {
  DetectionReport report;
  report.standard = run_standard(recording, trials, config);
  report.novel = run_novel(recording, trials, config);
  report.config_json = config_to_json(config);
  if (report.standard->n_trials_analyzed == 0 &&
      report.novel->n_trials_analyzed == 0) {
    throw InputError("no trial is valid for either method");
  }

  DetectionReport::Aligned aligned;

  // Standard side: the R2A1 row, one per-trial decision per channel plus the
  // any-channel rule over trials with at least one usable channel measure.
  const PeriodPair aligned_pair{PeriodKind::R2, PeriodKind::A1};
  std::map<std::int64_t, bool> any_identified;
  for (const auto& cell : report.standard->cells) {
    if (cell.pair.name() != aligned_pair.name()) continue;
    aligned.standard_per_channel_pct.push_back(cell.identification_pct);
    for (std::size_t i = 0; i < cell.per_trial.size(); ++i) {
      const bool id =
          cell.per_trial[i].identified(config.identification_threshold_percent);
      auto [it, inserted] = any_identified.emplace(cell.trial_indices[i], id);
      if (!inserted) it->second = it->second || id;
    }
  }
  if (!any_identified.empty()) {
    std::size_t hits = 0;
    for (const auto& [trial, id] : any_identified) hits += id ? 1 : 0;
    aligned.standard_any_channel_pct =
        100.0 * static_cast<double>(hits) /
        static_cast<double>(any_identified.size());
  }

  // Streaming side: first transition at the reporting band, per group and
  // any-group over trials with at least one evaluable group.
  {
    const NovelRunResult& novel = *report.novel;
    const auto& cells = novel.cells.at(novel.reporting_band_index);
    for (std::size_t g = 0; g < 3; ++g) {
      aligned.novel_per_group_pct.push_back(cells[g].identification_pct);
    }
    std::size_t evaluable = 0;
    std::size_t hits = 0;
    for (const auto& groups : novel.reporting_first_transition) {
      bool any = false;
      bool has = false;
      for (const auto& dec : groups) {
        if (!dec.mean_ratio) continue;
        has = true;
        any = any || dec.identified;
      }
      if (has) {
        ++evaluable;
        hits += any ? 1 : 0;
      }
    }
    if (evaluable > 0) {
      aligned.novel_any_group_pct =
          100.0 * static_cast<double>(hits) / static_cast<double>(evaluable);
    }
  }

  report.aligned = aligned;
  return report;
}

}  // namespace erdkit
