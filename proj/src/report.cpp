#include "erdkit/report.hpp"

#include <cstdio>
#include <functional>

#include <json.hpp>

#include "erdkit/errors.hpp"
#include "erdkit/io.hpp"

namespace erdkit {

namespace {

using nlohmann::json;

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

json opt_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

// Standard cells arrive pair-major, channel-minor; recover the channel list
// from the first pair's run of cells.
std::vector<std::string> standard_channels(const StandardRunResult& r) {
  std::vector<std::string> channels;
  if (r.cells.empty()) return channels;
  const std::string first_pair = r.cells.front().pair.name();
  for (const auto& cell : r.cells) {
    if (cell.pair.name() != first_pair) break;
    channels.push_back(cell.channel);
  }
  return channels;
}

std::string standard_table(const StandardRunResult& r,
                           const std::function<std::string(
                               const PairChannelResult&)>& cell_text) {
  const auto channels = standard_channels(r);
  std::string out = "pair";
  for (const auto& c : channels) out += "," + c;
  out += "\n";
  const std::size_t n_ch = channels.size();
  for (std::size_t i = 0; i < r.cells.size(); i += n_ch) {
    out += r.cells[i].pair.name();
    for (std::size_t c = 0; c < n_ch; ++c) {
      out += "," + cell_text(r.cells[i + c]);
    }
    out += "\n";
  }
  return out;
}

std::string novel_table(const NovelRunResult& r,
                        const std::function<std::string(const NovelCell&)>&
                            cell_text) {
  std::string out = "transition,left,inter,right\n";
  const auto labels = transition_labels();
  const auto& cells = r.cells.at(r.reporting_band_index);
  for (int t = 0; t < kNumTransitions; ++t) {
    out += labels[static_cast<std::size_t>(t)];
    for (std::size_t g = 0; g < 3; ++g) {
      out += "," + cell_text(cells[static_cast<std::size_t>(t) * 3 + g]);
    }
    out += "\n";
  }
  return out;
}

std::string mean_std_text(const std::optional<double>& mean,
                          const std::optional<double>& sd) {
  if (!mean) return "";
  return fixed2(*mean) + "/" + fixed2(sd.value_or(0.0));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> report_csv_tables(
    const DetectionReport& report) {
  std::vector<std::pair<std::string, std::string>> tables;
  if (report.standard) {
    const StandardRunResult& r = *report.standard;
    tables.emplace_back("_individual_frequency",
                        standard_table(r, [](const PairChannelResult& c) {
                          return fixed2(c.band.center_hz);
                        }));
    tables.emplace_back("_identification_standard",
                        standard_table(r, [](const PairChannelResult& c) {
                          return fixed2(c.identification_pct);
                        }));
    tables.emplace_back("_erd_identified_standard",
                        standard_table(r, [](const PairChannelResult& c) {
                          return mean_std_text(c.mean_identified,
                                               c.std_identified);
                        }));
  }
  if (report.novel) {
    const NovelRunResult& r = *report.novel;
    tables.emplace_back("_identification_novel",
                        novel_table(r, [](const NovelCell& c) {
                          return fixed2(c.identification_pct);
                        }));
    tables.emplace_back("_erd_identified_novel",
                        novel_table(r, [](const NovelCell& c) {
                          return mean_std_text(c.mean_identified,
                                               c.std_identified);
                        }));
  }
  return tables;
}

std::string report_to_json(const DetectionReport& report) {
  json doc = json::object();
  if (report.standard) {
    const StandardRunResult& r = *report.standard;
    json s;
    s["n_trials_total"] = r.n_trials_total;
    s["n_trials_analyzed"] = r.n_trials_analyzed;
    s["n_excluded_artifact"] = r.n_excluded_artifact;
    s["cells"] = json::array();
    for (const auto& cell : r.cells) {
      json c;
      c["pair"] = cell.pair.name();
      c["channel"] = cell.channel;
      c["band"] = {cell.band.band.lo_hz, cell.band.band.hi_hz};
      c["center_hz"] = cell.band.center_hz;
      c["band_fallback"] = cell.band.fallback;
      c["selection_mean_difference"] = cell.band.mean_difference;
      c["identification_pct"] = cell.identification_pct;
      c["mean_identified"] = opt_to_json(cell.mean_identified);
      c["std_identified"] = opt_to_json(cell.std_identified);
      c["n_valid_trials"] = cell.n_valid_trials;
      c["n_excluded_zero_reference"] = cell.n_excluded_zero_reference;
      c["average_trial_erd_percent"] =
          opt_to_json(cell.average_trial_erd_percent);
      json per_trial = json::array();
      for (std::size_t i = 0; i < cell.per_trial.size(); ++i) {
        per_trial.push_back({{"trial", cell.trial_indices[i]},
                             {"erd_percent", cell.per_trial[i].percent()}});
      }
      c["per_trial"] = std::move(per_trial);
      s["cells"].push_back(std::move(c));
    }
    doc["standard"] = std::move(s);
  }
  if (report.novel) {
    const NovelRunResult& r = *report.novel;
    json n;
    n["n_trials_total"] = r.n_trials_total;
    n["n_trials_analyzed"] = r.n_trials_analyzed;
    n["n_excluded_artifact"] = r.n_excluded_artifact;
    n["filter_group_delay_ms"] = r.filter_group_delay_ms;
    n["reporting_band_index"] = r.reporting_band_index;
    n["bank"] = json::array();
    for (const auto& b : r.bank) n["bank"].push_back({b.lo_hz, b.hi_hz});
    const auto labels = transition_labels();
    n["transitions"] = labels;
    n["cells"] = json::array();
    for (std::size_t b = 0; b < r.cells.size(); ++b) {
      for (const auto& cell : r.cells[b]) {
        json c;
        c["band_index"] = b;
        c["transition"] = labels[static_cast<std::size_t>(cell.transition)];
        c["group"] = to_string(cell.group);
        c["identification_pct"] = cell.identification_pct;
        c["mean_identified"] = opt_to_json(cell.mean_identified);
        c["std_identified"] = opt_to_json(cell.std_identified);
        c["n_evaluable_trials"] = cell.n_evaluable_trials;
        n["cells"].push_back(std::move(c));
      }
    }
    doc["novel"] = std::move(n);
  }
  if (report.aligned) {
    const auto& a = *report.aligned;
    doc["aligned"] = {
        {"standard_any_channel_pct", a.standard_any_channel_pct},
        {"novel_any_group_pct", a.novel_any_group_pct},
        {"standard_per_channel_pct", a.standard_per_channel_pct},
        {"novel_per_group_pct", a.novel_per_group_pct}};
  }
  if (!report.config_json.empty()) {
    try {
      doc["config"] = json::parse(report.config_json);
    } catch (const json::parse_error&) {
      doc["config"] = report.config_json;
    }
  }
  return doc.dump(2) + "\n";
}

void emit_report(const DetectionReport& report, const std::string& path,
                 ReportFormat format) {
  if (format == ReportFormat::Json) {
    write_text_file(path, report_to_json(report));
    return;
  }
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  const bool has_ext =
      dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : std::string(".csv");
  for (const auto& [suffix, text] : report_csv_tables(report)) {
    write_text_file(stem + suffix + ext, text);
  }
}

}  // namespace erdkit
