#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "erdkit/config.hpp"
#include "erdkit/errors.hpp"
#include "erdkit/io.hpp"
#include "erdkit/synth.hpp"
#include "helpers.hpp"

using namespace erdkit;

namespace {

// Unique temp path per test file; removed eagerly by each test.
std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("erdkit_test_" + name))
      .string();
}

struct PathGuard {
  std::string path;
  explicit PathGuard(std::string p) : path(std::move(p)) {}
  ~PathGuard() { std::remove(path.c_str()); }
};

Recording small_recording() {
  // Three channels, 1024 samples, two complete trials worth of triggers.
  Recording rec;
  rec.fs_hz = 512.0;
  rec.labels = {"C3", "Cz", "C4"};
  testutil::Rng rng(17);
  for (int c = 0; c < 3; ++c) {
    rec.channels.push_back(testutil::white_noise(rng, 1024, 5.0));
  }
  rec.channels[1][100] = 0.1 + 0.2;  // a value with a non-terminating binary tail
  rec.triggers = {
      {10, TriggerCode::TrialStart},  {60, TriggerCode::Cue1},
      {200, TriggerCode::Cue2},       {300, TriggerCode::MovementEnd},
      {500, TriggerCode::TrialStart}, {550, TriggerCode::Cue1},
      {700, TriggerCode::Cue2},       {800, TriggerCode::MovementEnd},
  };
  return rec;
}

bool recordings_equal(const Recording& a, const Recording& b) {
  if (a.fs_hz != b.fs_hz || a.labels != b.labels) return false;
  if (a.channels != b.channels) return false;
  if (a.triggers.size() != b.triggers.size()) return false;
  for (std::size_t i = 0; i < a.triggers.size(); ++i) {
    if (a.triggers[i].sample_index != b.triggers[i].sample_index ||
        a.triggers[i].code != b.triggers[i].code) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("format inference from extension") {
  CHECK(format_for_path("a/b/rec.csv") == RecordingFormat::CsvMatrix);
  CHECK(format_for_path("rec.jsonl") == RecordingFormat::JsonLines);
  CHECK_THROWS_AS(format_for_path("rec.dat"), InputError);
  CHECK_THROWS_AS(format_for_path("rec"), InputError);
}

TEST_CASE("jsonl round trip is bit-exact") {
  const Recording rec = small_recording();
  PathGuard file(temp_path("roundtrip.jsonl"));
  save_recording(rec, file.path, RecordingFormat::JsonLines);
  const Recording back = load_recording(file.path, RecordingFormat::JsonLines);
  CHECK(recordings_equal(rec, back));
  CHECK(back.triggers.size() == 8);

  // Saving the loaded copy reproduces the file byte for byte.
  PathGuard file2(temp_path("roundtrip2.jsonl"));
  save_recording(back, file2.path, RecordingFormat::JsonLines);
  CHECK(read_text_file(file.path) == read_text_file(file2.path));
}

TEST_CASE("csv round trip is bit-exact") {
  const Recording rec = small_recording();
  PathGuard file(temp_path("roundtrip.csv"));
  save_recording(rec, file.path, RecordingFormat::CsvMatrix);
  const Recording back = load_recording(file.path, RecordingFormat::CsvMatrix);
  CHECK(recordings_equal(rec, back));

  const std::string text = read_text_file(file.path);
  CHECK(text.rfind("fs=512", 0) == 0);
  CHECK(text.find("C3,Cz,C4,trigger") != std::string::npos);
}

TEST_CASE("malformed recordings carry line diagnostics") {
  PathGuard file(temp_path("bad.csv"));

  write_text_file(file.path, "");
  CHECK_THROWS_WITH_AS(load_recording(file.path, RecordingFormat::CsvMatrix),
                       doctest::Contains("empty recording file"), FormatError);

  write_text_file(file.path, "sample_rate=512\nC3,trigger\n0.0,0\n");
  CHECK_THROWS_WITH_AS(load_recording(file.path, RecordingFormat::CsvMatrix),
                       doctest::Contains("line 1"), FormatError);

  write_text_file(file.path, "fs=512\nC3,trigger\n0.0,0\n1.0\n");
  CHECK_THROWS_WITH_AS(load_recording(file.path, RecordingFormat::CsvMatrix),
                       doctest::Contains("line 4"), FormatError);

  write_text_file(file.path, "fs=512\nC3,trigger\nnope,0\n");
  CHECK_THROWS_AS(load_recording(file.path, RecordingFormat::CsvMatrix),
                  FormatError);

  // Out-of-range trigger code.
  write_text_file(file.path, "fs=512\nC3,trigger\n0.5,0\n0.25,9\n");
  CHECK_THROWS_WITH_AS(load_recording(file.path, RecordingFormat::CsvMatrix),
                       doctest::Contains("line 4"), FormatError);

  PathGuard jfile(temp_path("bad.jsonl"));
  write_text_file(jfile.path, "{\"fs\": 512}\n[0.0, 0]\n");
  CHECK_THROWS_WITH_AS(load_recording(jfile.path, RecordingFormat::JsonLines),
                       doctest::Contains("line 1"), FormatError);
  write_text_file(jfile.path,
                  "{\"fs\": 512, \"labels\": [\"C3\"]}\n[0.0, 0]\n[1.0]\n");
  CHECK_THROWS_WITH_AS(load_recording(jfile.path, RecordingFormat::JsonLines),
                       doctest::Contains("line 3"), FormatError);

  CHECK_THROWS_WITH_AS(
      load_recording("/nonexistent/rec.csv", RecordingFormat::CsvMatrix),
      doctest::Contains("/nonexistent/rec.csv"), InputError);
}

TEST_CASE("ground truth sidecar round trip") {
  const SynthResult out = generate(testutil::small_synth_spec(3, 50.0, 1.0, 8));
  PathGuard file(temp_path("truth.json"));
  save_ground_truth(out.truth, file.path);
  const GroundTruth back = load_ground_truth(file.path);

  CHECK(back.erd_depth_percent == out.truth.erd_depth_percent);
  CHECK(back.band == out.truth.band);
  REQUIRE(back.trials.size() == out.truth.trials.size());
  for (std::size_t t = 0; t < back.trials.size(); ++t) {
    CHECK(back.trials[t].trial_start == out.truth.trials[t].trial_start);
    CHECK(back.trials[t].cue1 == out.truth.trials[t].cue1);
    CHECK(back.trials[t].cue2 == out.truth.trials[t].cue2);
    CHECK(back.trials[t].movement_end == out.truth.trials[t].movement_end);
    CHECK(back.trials[t].period_ratio == out.truth.trials[t].period_ratio);
    CHECK(back.trials[t].injected_artifacts ==
          out.truth.trials[t].injected_artifacts);
  }

  write_text_file(file.path, "{\"trials\": 3}");
  CHECK_THROWS_AS(load_ground_truth(file.path), FormatError);
}

TEST_CASE("config defaults validate and survive a json round trip") {
  const AnalysisConfig cfg = default_config();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.differential_pairs.size() == 33);
  CHECK(cfg.montage.size() == 16);
  CHECK(cfg.bands.hop_hz() == 1.0);

  const std::string text = config_to_json(cfg);
  const AnalysisConfig back = parse_config_json(text);
  CHECK_NOTHROW(back.validate());
  CHECK(config_to_json(back) == text);  // canonical form is a fixed point
  CHECK(back.identification_threshold_percent ==
        cfg.identification_threshold_percent);
  CHECK(back.bands.reporting_band == cfg.bands.reporting_band);
  CHECK(back.differential_pairs.size() == cfg.differential_pairs.size());
  CHECK(back.seed == cfg.seed);
  CHECK(back.synth.smr.center_hz == cfg.synth.smr.center_hz);
}

TEST_CASE("config parsing rejects unknown keys with a dotted path") {
  CHECK_THROWS_WITH_AS(parse_config_json("{\"bands\": {\"witdh_hz\": 2}}"),
                       doctest::Contains("bands.witdh_hz"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_json("{\"sede\": 1}"),
                       doctest::Contains("sede"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("{\"seed\": \"twelve\"}"), ConfigError);
  // Malformed JSON is a format problem, not a semantic config problem.
  CHECK_THROWS_AS(parse_config_json("not json at all"), FormatError);
}

TEST_CASE("config overrides apply and are validated") {
  const AnalysisConfig cfg = parse_config_json(
      "{\"identification_threshold_percent\": 20,"
      " \"bands\": {\"reporting_band\": [9.5, 11.5]},"
      " \"synth\": {\"n_trials\": 7, \"smr\": {\"center_hz\": 10.5}}}");
  CHECK(cfg.identification_threshold_percent == 20.0);
  CHECK(cfg.bands.reporting_band == FrequencyBand{9.5, 11.5});
  CHECK(cfg.synth.n_trials == 7);
  CHECK(cfg.synth.smr.center_hz == 10.5);
  // Montage and timing are mirrored into the generator spec.
  CHECK(cfg.synth.montage.size() == cfg.montage.size());

  // A reporting band that is not in the enumerated bank is rejected.
  CHECK_THROWS_AS(
      parse_config_json("{\"bands\": {\"reporting_band\": [9.25, 11.25]}}"),
      ConfigError);
}

TEST_CASE("load_config reports the missing path") {
  CHECK_THROWS_WITH_AS(load_config("/nonexistent/config.json"),
                       doctest::Contains("/nonexistent/config.json"),
                       InputError);
}
