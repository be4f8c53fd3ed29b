#include "erdkit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "erdkit/errors.hpp"

namespace erdkit {

namespace {

using nlohmann::json;

[[noreturn]] void bad_type(const std::string& path, const char* want) {
  throw ConfigError("config field '" + path + "' must be " + want);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) bad_type(path.empty() ? "(root)" : path, "an object");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key '" +
                        (path.empty() ? item.key() : path + "." + item.key()) +
                        "'");
    }
  }
}

void read_double(const json& obj, const char* key, double& target,
                 const std::string& path) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) bad_type(path + "." + key, "a number");
  target = v.get<double>();
}

void read_int(const json& obj, const char* key, int& target,
              const std::string& path) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad_type(path + "." + key, "an integer");
  target = v.get<int>();
}

void read_u64(const json& obj, const char* key, std::uint64_t& target,
              const std::string& path) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    bad_type(path + "." + key, "an integer");
  }
  target = v.get<std::uint64_t>();
}

void read_bool(const json& obj, const char* key, bool& target,
               const std::string& path) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_boolean()) bad_type(path + "." + key, "a boolean");
  target = v.get<bool>();
}

Hemisphere parse_hemisphere(const std::string& s, const std::string& path) {
  if (s == "left") return Hemisphere::Left;
  if (s == "midline") return Hemisphere::Midline;
  if (s == "right") return Hemisphere::Right;
  throw ConfigError("config field '" + path +
                    "' must be one of left, midline, right");
}

void parse_timing(const json& obj, TrialTiming& t, const std::string& path) {
  check_keys(obj, path,
             {"pre_trigger_ms", "post_trigger_ms", "reaction_ms",
              "movement_min_ms", "movement_max_ms", "recovery_ms",
              "r1_anchor_ms"});
  read_double(obj, "pre_trigger_ms", t.pre_trigger_ms, path);
  read_double(obj, "post_trigger_ms", t.post_trigger_ms, path);
  read_double(obj, "reaction_ms", t.reaction_ms, path);
  read_double(obj, "movement_min_ms", t.movement_min_ms, path);
  read_double(obj, "movement_max_ms", t.movement_max_ms, path);
  read_double(obj, "recovery_ms", t.recovery_ms, path);
  read_double(obj, "r1_anchor_ms", t.r1_anchor_ms, path);
}

FrequencyBand parse_band(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad_type(path, "an array [lo_hz, hi_hz]");
  }
  return FrequencyBand{v[0].get<double>(), v[1].get<double>()};
}

void parse_artifact(const json& obj, ArtifactParams& a, const std::string& path) {
  check_keys(obj, path,
             {"derivative_threshold_uv", "threshold_scale", "rolling_window_ms",
              "min_consecutive_samples", "max_suppression_ms", "taper_samples"});
  if (obj.contains("derivative_threshold_uv")) {
    const json& v = obj.at("derivative_threshold_uv");
    if (v.is_null()) {
      a.derivative_threshold_uv.reset();
    } else if (v.is_number()) {
      a.derivative_threshold_uv = v.get<double>();
    } else {
      bad_type(path + ".derivative_threshold_uv", "a number or null");
    }
  }
  read_double(obj, "threshold_scale", a.threshold_scale, path);
  read_double(obj, "rolling_window_ms", a.rolling_window_ms, path);
  read_int(obj, "min_consecutive_samples", a.min_consecutive_samples, path);
  read_double(obj, "max_suppression_ms", a.max_suppression_ms, path);
  read_int(obj, "taper_samples", a.taper_samples, path);
}

void parse_filter(const json& obj, FilterSpec& f, const std::string& path) {
  check_keys(obj, path, {"transition_width_hz", "stopband_atten_db"});
  read_double(obj, "transition_width_hz", f.transition_width_hz, path);
  read_double(obj, "stopband_atten_db", f.stopband_atten_db, path);
}

Montage parse_montage(const json& obj, const std::string& path) {
  check_keys(obj, path, {"midline_col", "electrodes"});
  int midline = 2;
  read_int(obj, "midline_col", midline, path);
  if (!obj.contains("electrodes")) {
    throw ConfigError("config field '" + path + ".electrodes' is required");
  }
  const json& arr = obj.at("electrodes");
  if (!arr.is_array()) bad_type(path + ".electrodes", "an array");
  std::vector<Electrode> electrodes;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string epath = path + ".electrodes[" + std::to_string(i) + "]";
    const json& e = arr[i];
    check_keys(e, epath, {"label", "row", "col"});
    Electrode el;
    if (!e.contains("label") || !e.at("label").is_string()) {
      bad_type(epath + ".label", "a string");
    }
    el.label = e.at("label").get<std::string>();
    read_int(e, "row", el.grid_row, epath);
    read_int(e, "col", el.grid_col, epath);
    el.hemisphere = Montage::hemisphere_for(el.grid_col, midline);
    electrodes.push_back(std::move(el));
  }
  return Montage(std::move(electrodes), midline);
}

std::vector<DifferentialPair> parse_pairs(const json& arr, const Montage& montage,
                                          const std::string& path) {
  if (!arr.is_array()) bad_type(path, "an array of [pos, neg] label pairs");
  std::vector<DifferentialPair> pairs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& p = arr[i];
    const std::string ppath = path + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
      bad_type(ppath, "an array [pos_label, neg_label]");
    }
    DifferentialPair pair;
    pair.pos = p[0].get<std::string>();
    pair.neg = p[1].get<std::string>();
    pair.group = group_for_pair(montage, pair.pos, pair.neg);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void parse_synth(const json& obj, SynthSpec& s, const std::string& path) {
  check_keys(obj, path,
             {"n_trials", "fs_hz", "smr", "background", "artifact",
              "baseline_ms", "inter_trial_rest_ms", "movement_ms", "seed"});
  read_int(obj, "n_trials", s.n_trials, path);
  read_double(obj, "fs_hz", s.fs_hz, path);
  if (obj.contains("smr")) {
    const json& m = obj.at("smr");
    const std::string mpath = path + ".smr";
    check_keys(m, mpath,
               {"center_hz", "bandwidth_hz", "rest_amplitude_uv",
                "erd_depth_percent", "phase_gradient_col_rad",
                "phase_gradient_row_rad", "affected_groups"});
    read_double(m, "center_hz", s.smr.center_hz, mpath);
    read_double(m, "bandwidth_hz", s.smr.bandwidth_hz, mpath);
    read_double(m, "rest_amplitude_uv", s.smr.rest_amplitude_uv, mpath);
    read_double(m, "erd_depth_percent", s.smr.erd_depth_percent, mpath);
    read_double(m, "phase_gradient_col_rad", s.smr.phase_gradient_col_rad, mpath);
    read_double(m, "phase_gradient_row_rad", s.smr.phase_gradient_row_rad, mpath);
    if (m.contains("affected_groups")) {
      const json& g = m.at("affected_groups");
      if (!g.is_array()) bad_type(mpath + ".affected_groups", "an array");
      s.smr.affected_groups.clear();
      for (const auto& h : g) {
        if (!h.is_string()) bad_type(mpath + ".affected_groups", "string entries");
        s.smr.affected_groups.push_back(
            parse_hemisphere(h.get<std::string>(), mpath + ".affected_groups"));
      }
    }
  }
  if (obj.contains("background")) {
    const json& b = obj.at("background");
    const std::string bpath = path + ".background";
    check_keys(b, bpath, {"noise_rms_uv", "common_fraction", "lowest_hz"});
    read_double(b, "noise_rms_uv", s.background.noise_rms_uv, bpath);
    read_double(b, "common_fraction", s.background.common_fraction, bpath);
    read_double(b, "lowest_hz", s.background.lowest_hz, bpath);
  }
  if (obj.contains("artifact")) {
    const json& a = obj.at("artifact");
    const std::string apath = path + ".artifact";
    check_keys(a, apath, {"probability_per_trial", "peak_uv", "decay_ms"});
    read_double(a, "probability_per_trial", s.artifact.probability_per_trial,
                apath);
    read_double(a, "peak_uv", s.artifact.peak_uv, apath);
    read_double(a, "decay_ms", s.artifact.decay_ms, apath);
  }
  read_double(obj, "baseline_ms", s.baseline_ms, path);
  read_double(obj, "inter_trial_rest_ms", s.inter_trial_rest_ms, path);
  read_double(obj, "movement_ms", s.movement_ms, path);
  read_u64(obj, "seed", s.seed, path);
}

const char* hemisphere_name(Hemisphere h) {
  switch (h) {
    case Hemisphere::Left: return "left";
    case Hemisphere::Midline: return "midline";
    case Hemisphere::Right: return "right";
  }
  return "midline";
}

}  // namespace

void AnalysisConfig::validate() const {
  timing.validate();
  if (montage.size() == 0) throw ConfigError("montage must not be empty");
  validate_pairs(montage, differential_pairs, strict_pair_adjacency);

  if (!(bands.range_lo_hz >= 0.0) || !(bands.range_hi_hz > bands.range_lo_hz)) {
    throw ConfigError("bands.range must satisfy 0 <= lo < hi");
  }
  if (!(bands.width_hz > 0.0)) throw ConfigError("bands.width_hz must be positive");
  if (!(bands.overlap_hz >= 0.0 && bands.overlap_hz < bands.width_hz)) {
    throw ConfigError("bands.overlap_hz must be in [0, width_hz)");
  }
  const auto bank = enumerate_bands(bands.range_lo_hz, bands.range_hi_hz,
                                    bands.width_hz, bands.hop_hz());
  bool reporting_in_bank = false;
  for (const auto& b : bank) {
    if (b == bands.reporting_band) reporting_in_bank = true;
  }
  if (!reporting_in_bank) {
    throw ConfigError("bands.reporting_band must be one of the analysis bands");
  }

  if (!(identification_threshold_percent > 0.0 &&
        identification_threshold_percent < 100.0)) {
    throw ConfigError("identification_threshold_percent must be in (0, 100)");
  }
  artifact.validate();
  for (const FilterSpec* f : {&filters.standard, &filters.novel}) {
    if (!(f->transition_width_hz > 0.0)) {
      throw ConfigError("filters.*.transition_width_hz must be positive");
    }
    if (!(f->stopband_atten_db > 0.0)) {
      throw ConfigError("filters.*.stopband_atten_db must be positive");
    }
  }
  if (standard.channels.empty()) {
    throw ConfigError("standard.channels must not be empty");
  }
  for (const auto& label : standard.channels) {
    if (!montage.has(label)) {
      throw ConfigError("standard.channels entry '" + label +
                        "' is not in the montage");
    }
  }
  if (standard.min_trials_for_selection < 2) {
    throw ConfigError("standard.min_trials_for_selection must be at least 2");
  }
  if (bench.repetitions < 3) {
    throw ConfigError("bench.repetitions must be at least 3");
  }
  synth.validate();
}

AnalysisConfig default_config() {
  AnalysisConfig cfg;
  cfg.montage = default_montage();
  cfg.differential_pairs = default_differential_pairs();
  cfg.synth.montage = cfg.montage;
  cfg.synth.timing = cfg.timing;
  cfg.synth.seed = cfg.seed;
  return cfg;
}

AnalysisConfig parse_config_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "",
             {"montage", "timing", "differential_pairs", "bands",
              "identification_threshold_percent", "artifact", "filters",
              "standard", "bench", "strict_pair_adjacency", "seed", "synth"});

  AnalysisConfig cfg = default_config();
  if (doc.contains("montage")) cfg.montage = parse_montage(doc.at("montage"), "montage");
  if (doc.contains("timing")) parse_timing(doc.at("timing"), cfg.timing, "timing");
  if (doc.contains("bands")) {
    const json& b = doc.at("bands");
    check_keys(b, "bands",
               {"range_lo_hz", "range_hi_hz", "width_hz", "overlap_hz",
                "reporting_band"});
    read_double(b, "range_lo_hz", cfg.bands.range_lo_hz, "bands");
    read_double(b, "range_hi_hz", cfg.bands.range_hi_hz, "bands");
    read_double(b, "width_hz", cfg.bands.width_hz, "bands");
    read_double(b, "overlap_hz", cfg.bands.overlap_hz, "bands");
    if (b.contains("reporting_band")) {
      cfg.bands.reporting_band =
          parse_band(b.at("reporting_band"), "bands.reporting_band");
    }
  }
  if (doc.contains("identification_threshold_percent")) {
    read_double(doc, "identification_threshold_percent",
                cfg.identification_threshold_percent, "");
  }
  if (doc.contains("artifact")) {
    parse_artifact(doc.at("artifact"), cfg.artifact, "artifact");
  }
  if (doc.contains("filters")) {
    const json& f = doc.at("filters");
    check_keys(f, "filters", {"standard", "novel"});
    if (f.contains("standard")) {
      parse_filter(f.at("standard"), cfg.filters.standard, "filters.standard");
    }
    if (f.contains("novel")) {
      parse_filter(f.at("novel"), cfg.filters.novel, "filters.novel");
    }
  }
  if (doc.contains("standard")) {
    const json& s = doc.at("standard");
    check_keys(s, "standard",
               {"channels", "min_trials_for_selection", "average_trial_mode"});
    if (s.contains("channels")) {
      const json& ch = s.at("channels");
      if (!ch.is_array()) bad_type("standard.channels", "an array of labels");
      cfg.standard.channels.clear();
      for (const auto& c : ch) {
        if (!c.is_string()) bad_type("standard.channels", "string entries");
        cfg.standard.channels.push_back(c.get<std::string>());
      }
    }
    read_int(s, "min_trials_for_selection", cfg.standard.min_trials_for_selection,
             "standard");
    read_bool(s, "average_trial_mode", cfg.standard.average_trial_mode,
              "standard");
  }
  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    check_keys(b, "bench", {"repetitions"});
    read_int(b, "repetitions", cfg.bench.repetitions, "bench");
  }
  read_bool(doc, "strict_pair_adjacency", cfg.strict_pair_adjacency, "");
  read_u64(doc, "seed", cfg.seed, "");
  if (doc.contains("synth")) {
    // Remember whether the stream seed was given explicitly before mirroring.
    const bool synth_seed_given = doc.at("synth").contains("seed");
    parse_synth(doc.at("synth"), cfg.synth, "synth");
    if (!synth_seed_given) cfg.synth.seed = cfg.seed;
  } else {
    cfg.synth.seed = cfg.seed;
  }
  if (doc.contains("differential_pairs")) {
    cfg.differential_pairs =
        parse_pairs(doc.at("differential_pairs"), cfg.montage,
                    "differential_pairs");
  } else if (doc.contains("montage")) {
    // A custom montage invalidates the default pair list unless it still
    // resolves; re-derive groups where possible.
    for (auto& p : cfg.differential_pairs) {
      p.group = group_for_pair(cfg.montage, p.pos, p.neg);
    }
  }
  cfg.synth.montage = cfg.montage;
  cfg.synth.timing = cfg.timing;
  cfg.validate();
  return cfg;
}

AnalysisConfig load_config(const std::string& path) {
  if (path == "default") {
    AnalysisConfig cfg = default_config();
    cfg.validate();
    return cfg;
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string config_to_json(const AnalysisConfig& cfg) {
  json doc;
  json mont;
  mont["midline_col"] = cfg.montage.midline_col();
  mont["electrodes"] = json::array();
  for (const auto& e : cfg.montage.electrodes()) {
    mont["electrodes"].push_back(
        {{"label", e.label}, {"row", e.grid_row}, {"col", e.grid_col}});
  }
  doc["montage"] = std::move(mont);
  doc["timing"] = {{"pre_trigger_ms", cfg.timing.pre_trigger_ms},
                   {"post_trigger_ms", cfg.timing.post_trigger_ms},
                   {"reaction_ms", cfg.timing.reaction_ms},
                   {"movement_min_ms", cfg.timing.movement_min_ms},
                   {"movement_max_ms", cfg.timing.movement_max_ms},
                   {"recovery_ms", cfg.timing.recovery_ms},
                   {"r1_anchor_ms", cfg.timing.r1_anchor_ms}};
  doc["differential_pairs"] = json::array();
  for (const auto& p : cfg.differential_pairs) {
    doc["differential_pairs"].push_back({p.pos, p.neg});
  }
  doc["bands"] = {{"range_lo_hz", cfg.bands.range_lo_hz},
                  {"range_hi_hz", cfg.bands.range_hi_hz},
                  {"width_hz", cfg.bands.width_hz},
                  {"overlap_hz", cfg.bands.overlap_hz},
                  {"reporting_band",
                   {cfg.bands.reporting_band.lo_hz, cfg.bands.reporting_band.hi_hz}}};
  doc["identification_threshold_percent"] = cfg.identification_threshold_percent;
  json art;
  if (cfg.artifact.derivative_threshold_uv) {
    art["derivative_threshold_uv"] = *cfg.artifact.derivative_threshold_uv;
  } else {
    art["derivative_threshold_uv"] = nullptr;
  }
  art["threshold_scale"] = cfg.artifact.threshold_scale;
  art["rolling_window_ms"] = cfg.artifact.rolling_window_ms;
  art["min_consecutive_samples"] = cfg.artifact.min_consecutive_samples;
  art["max_suppression_ms"] = cfg.artifact.max_suppression_ms;
  art["taper_samples"] = cfg.artifact.taper_samples;
  doc["artifact"] = std::move(art);
  doc["filters"] = {
      {"standard",
       {{"transition_width_hz", cfg.filters.standard.transition_width_hz},
        {"stopband_atten_db", cfg.filters.standard.stopband_atten_db}}},
      {"novel",
       {{"transition_width_hz", cfg.filters.novel.transition_width_hz},
        {"stopband_atten_db", cfg.filters.novel.stopband_atten_db}}}};
  doc["standard"] = {{"channels", cfg.standard.channels},
                     {"min_trials_for_selection",
                      cfg.standard.min_trials_for_selection},
                     {"average_trial_mode", cfg.standard.average_trial_mode}};
  doc["bench"] = {{"repetitions", cfg.bench.repetitions}};
  doc["strict_pair_adjacency"] = cfg.strict_pair_adjacency;
  doc["seed"] = cfg.seed;
  json synth;
  synth["n_trials"] = cfg.synth.n_trials;
  synth["fs_hz"] = cfg.synth.fs_hz;
  json groups = json::array();
  for (Hemisphere h : cfg.synth.smr.affected_groups) {
    groups.push_back(hemisphere_name(h));
  }
  synth["smr"] = {{"center_hz", cfg.synth.smr.center_hz},
                  {"bandwidth_hz", cfg.synth.smr.bandwidth_hz},
                  {"rest_amplitude_uv", cfg.synth.smr.rest_amplitude_uv},
                  {"erd_depth_percent", cfg.synth.smr.erd_depth_percent},
                  {"phase_gradient_col_rad", cfg.synth.smr.phase_gradient_col_rad},
                  {"phase_gradient_row_rad", cfg.synth.smr.phase_gradient_row_rad},
                  {"affected_groups", std::move(groups)}};
  synth["background"] = {{"noise_rms_uv", cfg.synth.background.noise_rms_uv},
                         {"common_fraction", cfg.synth.background.common_fraction},
                         {"lowest_hz", cfg.synth.background.lowest_hz}};
  synth["artifact"] = {
      {"probability_per_trial", cfg.synth.artifact.probability_per_trial},
      {"peak_uv", cfg.synth.artifact.peak_uv},
      {"decay_ms", cfg.synth.artifact.decay_ms}};
  synth["baseline_ms"] = cfg.synth.baseline_ms;
  synth["inter_trial_rest_ms"] = cfg.synth.inter_trial_rest_ms;
  synth["movement_ms"] = cfg.synth.movement_ms;
  synth["seed"] = cfg.synth.seed;
  doc["synth"] = std::move(synth);
  return doc.dump(2) + "\n";
}

}  // namespace erdkit
