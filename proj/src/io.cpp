#include "erdkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "erdkit/errors.hpp"

namespace erdkit {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("line " + std::to_string(line_no) +
                      ": expected a number, got '" + text + "'");
  }
  return value;
}

Recording load_csv(std::istream& in) {
  Recording rec;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty recording file");
  if (line.rfind("fs=", 0) != 0) {
    throw FormatError("line 1: expected 'fs=<hz>' header");
  }
  rec.fs_hz = parse_double(line.substr(3), 1);
  if (!std::getline(in, line)) throw FormatError("missing channel label row");
  auto labels = split_csv(line);
  if (labels.size() < 2 || labels.back() != "trigger") {
    throw FormatError("line 2: expected channel labels ending in 'trigger'");
  }
  labels.pop_back();
  rec.labels = labels;
  rec.channels.assign(rec.labels.size(), {});

  std::size_t line_no = 2;
  std::int64_t sample = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != rec.labels.size() + 1) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rec.labels.size() + 1) + " cells, got " +
                        std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < rec.labels.size(); ++c) {
      rec.channels[c].push_back(parse_double(cells[c], line_no));
    }
    const double trig = parse_double(cells.back(), line_no);
    if (trig != 0.0) {
      const int code = static_cast<int>(trig);
      if (static_cast<double>(code) != trig || !is_valid_trigger_code(code)) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": invalid trigger code '" + cells.back() + "'");
      }
      rec.triggers.push_back({sample, static_cast<TriggerCode>(code)});
    }
    ++sample;
  }
  rec.validate();
  return rec;
}

void save_csv(const Recording& rec, std::ostream& out) {
  char fs_buf[64];
  const auto [fs_ptr, fs_ec] =
      std::to_chars(fs_buf, fs_buf + sizeof fs_buf, rec.fs_hz);
  internal_check(fs_ec == std::errc{}, "number formatting failed");
  out << "fs=" << std::string_view(fs_buf, fs_ptr) << "\n";
  for (const auto& label : rec.labels) out << label << ",";
  out << "trigger\n";
  std::vector<int> trigger_at(static_cast<std::size_t>(rec.n_samples()), 0);
  for (const auto& t : rec.triggers) {
    trigger_at[static_cast<std::size_t>(t.sample_index)] =
        static_cast<int>(t.code);
  }
  char buf[64];
  const std::int64_t n = rec.n_samples();
  for (std::int64_t i = 0; i < n; ++i) {
    for (const auto& ch : rec.channels) {
      const auto [ptr, ec] =
          std::to_chars(buf, buf + sizeof buf, ch[static_cast<std::size_t>(i)]);
      internal_check(ec == std::errc{}, "number formatting failed");
      out.write(buf, ptr - buf);
      out.put(',');
    }
    out << trigger_at[static_cast<std::size_t>(i)] << "\n";
  }
}

Recording load_jsonl(std::istream& in) {
  Recording rec;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty recording file");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("line 1: invalid JSON header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("fs") || !header.contains("labels") ||
      !header.at("fs").is_number() || !header.at("labels").is_array()) {
    throw FormatError("line 1: expected header {\"fs\": <hz>, \"labels\": [...]}");
  }
  rec.fs_hz = header.at("fs").get<double>();
  for (const auto& l : header.at("labels")) {
    if (!l.is_string()) throw FormatError("line 1: labels must be strings");
    rec.labels.push_back(l.get<std::string>());
  }
  rec.channels.assign(rec.labels.size(), {});

  std::size_t line_no = 1;
  std::int64_t sample = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": invalid JSON row: " + e.what());
    }
    if (!row.is_array() || row.size() != rec.labels.size() + 1) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rec.labels.size() + 1) +
                        "-element array");
    }
    for (std::size_t c = 0; c < rec.labels.size(); ++c) {
      if (!row[c].is_number()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": non-numeric sample");
      }
      rec.channels[c].push_back(row[c].get<double>());
    }
    const json& trig = row.back();
    if (!trig.is_number_integer()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": trigger must be an integer");
    }
    const int code = trig.get<int>();
    if (code != 0) {
      if (!is_valid_trigger_code(code)) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": invalid trigger code " + std::to_string(code));
      }
      rec.triggers.push_back({sample, static_cast<TriggerCode>(code)});
    }
    ++sample;
  }
  rec.validate();
  return rec;
}

void save_jsonl(const Recording& rec, std::ostream& out) {
  json header;
  header["fs"] = rec.fs_hz;
  header["labels"] = rec.labels;
  out << header.dump() << "\n";
  std::vector<int> trigger_at(static_cast<std::size_t>(rec.n_samples()), 0);
  for (const auto& t : rec.triggers) {
    trigger_at[static_cast<std::size_t>(t.sample_index)] =
        static_cast<int>(t.code);
  }
  const std::int64_t n = rec.n_samples();
  for (std::int64_t i = 0; i < n; ++i) {
    json row = json::array();
    for (const auto& ch : rec.channels) row.push_back(ch[static_cast<std::size_t>(i)]);
    row.push_back(trigger_at[static_cast<std::size_t>(i)]);
    out << row.dump() << "\n";
  }
}

}  // namespace

RecordingFormat format_for_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".csv") return RecordingFormat::CsvMatrix;
  if (ext == ".jsonl") return RecordingFormat::JsonLines;
  throw InputError("cannot infer recording format from '" + path +
                   "' (expected .csv or .jsonl)");
}

Recording load_recording(const std::string& path, RecordingFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open recording file '" + path + "'");
  try {
    return format == RecordingFormat::CsvMatrix ? load_csv(in) : load_jsonl(in);
  } catch (FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_recording(const Recording& rec, const std::string& path,
                    RecordingFormat format) {
  rec.validate();
  std::ofstream out(path);
  if (!out) throw InputError("cannot write recording file '" + path + "'");
  if (format == RecordingFormat::CsvMatrix) {
    save_csv(rec, out);
  } else {
    save_jsonl(rec, out);
  }
  if (!out) throw InputError("write to '" + path + "' failed");
}

void save_ground_truth(const GroundTruth& truth, const std::string& path) {
  json doc;
  doc["erd_depth_percent"] = truth.erd_depth_percent;
  doc["band"] = json::array({truth.band.lo_hz, truth.band.hi_hz});
  doc["trials"] = json::array();
  for (const auto& t : truth.trials) {
    json jt;
    jt["trial_start"] = t.trial_start;
    jt["cue1"] = t.cue1;
    jt["cue2"] = t.cue2;
    jt["movement_end"] = t.movement_end;
    jt["period_ratio"] = t.period_ratio;
    json spans = json::array();
    for (const auto& s : t.injected_artifacts) spans.push_back({s.begin, s.end});
    jt["injected_artifacts"] = std::move(spans);
    if (!t.artifact_channel.empty()) jt["artifact_channel"] = t.artifact_channel;
    doc["trials"].push_back(std::move(jt));
  }
  write_text_file(path, doc.dump(2) + "\n");
}

GroundTruth load_ground_truth(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": invalid JSON: " + e.what());
  }
  GroundTruth truth;
  try {
    truth.erd_depth_percent = doc.at("erd_depth_percent").get<double>();
    truth.band = {doc.at("band").at(0).get<double>(),
                  doc.at("band").at(1).get<double>()};
    for (const auto& jt : doc.at("trials")) {
      TrialTruth t;
      t.trial_start = jt.at("trial_start").get<std::int64_t>();
      t.cue1 = jt.at("cue1").get<std::int64_t>();
      t.cue2 = jt.at("cue2").get<std::int64_t>();
      t.movement_end = jt.at("movement_end").get<std::int64_t>();
      t.period_ratio =
          jt.at("period_ratio").get<std::map<std::string, double>>();
      for (const auto& s : jt.at("injected_artifacts")) {
        t.injected_artifacts.push_back(
            {s.at(0).get<std::int64_t>(), s.at(1).get<std::int64_t>()});
      }
      if (jt.contains("artifact_channel")) {
        t.artifact_channel = jt.at("artifact_channel").get<std::string>();
      }
      truth.trials.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw FormatError(path + ": malformed ground truth: " + e.what());
  }
  return truth;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

}  // namespace erdkit
