#pragma once

#include <string>

#include "erdkit/novel_erd.hpp"
#include "erdkit/standard_erd.hpp"

namespace erdkit {

enum class ReportFormat { Json, CsvTables };

// Joint results of both pipelines plus the aligned comparison summary.
struct DetectionReport {
  std::optional<StandardRunResult> standard;
  std::optional<NovelRunResult> novel;

  // Aligned cells: standard R2A1 per channel vs the novel first transition
  // per group at the reporting band; "any" rules give one per-trial decision
  // per method.
  struct Aligned {
    double standard_any_channel_pct = 0.0;
    double novel_any_group_pct = 0.0;
    std::vector<double> standard_per_channel_pct;
    std::vector<double> novel_per_group_pct;
  };
  std::optional<Aligned> aligned;

  std::string config_json;  // config echo for reproducibility
};

// Json: one document at `path`. CsvTables: five files sharing the stem of
// `path` (suffixes _individual_frequency, _identification_standard,
// _erd_identified_standard, _identification_novel, _erd_identified_novel).
// Layout mirrors the report tables: standard rows R1A1..R2A3 x columns
// C3/Cz/C4; novel rows -1.5 s/-1 s/-0.5 s/onset x columns left/inter/right;
// numeric cells fixed two decimals.
void emit_report(const DetectionReport& report, const std::string& path,
                 ReportFormat format);

std::string report_to_json(const DetectionReport& report);

// The five CsvTables payloads keyed by suffix, for tests and emit_report.
std::vector<std::pair<std::string, std::string>> report_csv_tables(
    const DetectionReport& report);

}  // namespace erdkit
