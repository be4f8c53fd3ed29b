#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "erdkit/bench.hpp"
#include "erdkit/compare.hpp"
#include "erdkit/config.hpp"
#include "erdkit/errors.hpp"
#include "erdkit/io.hpp"
#include "erdkit/novel_erd.hpp"
#include "erdkit/report.hpp"
#include "erdkit/standard_erd.hpp"
#include "erdkit/synth.hpp"

namespace {

struct CommonArgs {
  std::string config_path = "default";
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "Config JSON path, or 'default' for built-in defaults");
  cmd->add_flag("--verbose", args.verbose, "Progress messages on stderr");
}

erdkit::ReportFormat parse_format(const std::string& name) {
  if (name == "json") return erdkit::ReportFormat::Json;
  if (name == "csv") return erdkit::ReportFormat::CsvTables;
  throw erdkit::InputError("unknown report format '" + name +
                           "' (expected json or csv)");
}

struct LoadedInput {
  erdkit::Recording recording;
  erdkit::TrialSet trials;
};

LoadedInput load_input(const std::string& path, const erdkit::AnalysisConfig& cfg,
                       bool verbose) {
  LoadedInput in;
  in.recording = erdkit::load_recording(path, erdkit::format_for_path(path));
  in.trials = erdkit::segment_trials(in.recording, cfg.timing);
  if (verbose) {
    std::cerr << "loaded " << path << ": " << in.recording.labels.size()
              << " channels, " << in.recording.n_samples() << " samples, "
              << in.trials.trials.size() << " trials (" << in.trials.n_valid()
              << " valid)\n";
  }
  if (in.trials.trials.empty()) {
    throw erdkit::InputError("recording '" + path + "' contains no trials");
  }
  return in;
}

int run(int argc, char** argv) {
  CLI::App app{
      "EEG ERD detection toolkit: synthetic recordings, the offline "
      "band-power pipeline, the streaming energy-ratio pipeline, comparison "
      "and benchmarking"};
  app.require_subcommand(1);

  // --- synth ---
  CommonArgs synth_args;
  std::string synth_out;
  std::string synth_truth;
  std::uint64_t synth_seed = 0;
  bool synth_seed_set = false;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic recording");
  add_common(synth, synth_args);
  synth->add_option("--out", synth_out, "Output recording (.csv or .jsonl)")
      ->required();
  synth->add_option("--truth", synth_truth,
                    "Ground-truth sidecar path (default: <out>.truth.json)");
  synth->add_option("--seed", synth_seed, "Override the config seed")
      ->each([&](const std::string&) { synth_seed_set = true; });

  // --- analyze-standard / analyze-novel / compare ---
  struct AnalyzeArgs {
    CommonArgs common;
    std::string in;
    std::string out;
    std::string format = "json";
  };
  AnalyzeArgs std_args, nov_args, cmp_args;
  auto add_analyze = [](CLI::App* cmd, AnalyzeArgs& args) {
    add_common(cmd, args.common);
    cmd->add_option("--in", args.in, "Input recording (.csv or .jsonl)")
        ->required();
    cmd->add_option("--out", args.out, "Report output path")->required();
    cmd->add_option("--format", args.format, "Report format: json or csv");
  };
  auto* analyze_standard = app.add_subcommand(
      "analyze-standard", "Offline band-power pipeline only");
  add_analyze(analyze_standard, std_args);
  auto* analyze_novel = app.add_subcommand(
      "analyze-novel", "Streaming energy-ratio pipeline only");
  add_analyze(analyze_novel, nov_args);
  auto* compare = app.add_subcommand(
      "compare", "Both pipelines plus the aligned summary");
  add_analyze(compare, cmp_args);

  // --- bench ---
  CommonArgs bench_args;
  std::string bench_in;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Latency / cost benchmark");
  add_common(bench, bench_args);
  bench->add_option("--in", bench_in, "Input recording (.csv or .jsonl)")
      ->required();
  bench->add_option("--out", bench_out,
                    "Benchmark JSON path (default: stdout)");

  // --- validate ---
  CommonArgs val_args;
  std::string val_in;
  auto* validate = app.add_subcommand(
      "validate", "Check a config (and optionally a recording) without computing");
  add_common(validate, val_args);
  validate->add_option("--in", val_in, "Recording to validate");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(synth_args.config_path);
    if (synth_seed_set) {
      cfg.seed = synth_seed;
      cfg.synth.seed = synth_seed;
    }
    const erdkit::SynthResult result = erdkit::generate(cfg.synth);
    erdkit::save_recording(result.recording, synth_out,
                           erdkit::format_for_path(synth_out));
    const std::string truth_path =
        synth_truth.empty() ? synth_out + ".truth.json" : synth_truth;
    erdkit::save_ground_truth(result.truth, truth_path);
    if (synth_args.verbose) {
      std::cerr << "wrote " << synth_out << " ("
                << result.recording.n_samples() << " samples, "
                << result.trials.trials.size() << " trials) and " << truth_path
                << "\n";
    }
    return 0;
  }

  auto emit = [](const erdkit::DetectionReport& report, const AnalyzeArgs& args) {
    erdkit::emit_report(report, args.out, parse_format(args.format));
    if (args.common.verbose) std::cerr << "wrote " << args.out << "\n";
  };

  if (analyze_standard->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(std_args.common.config_path);
    LoadedInput in = load_input(std_args.in, cfg, std_args.common.verbose);
    erdkit::DetectionReport report;
    report.standard = erdkit::run_standard(in.recording, in.trials, cfg);
    report.config_json = erdkit::config_to_json(cfg);
    emit(report, std_args);
    return 0;
  }
  if (analyze_novel->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(nov_args.common.config_path);
    LoadedInput in = load_input(nov_args.in, cfg, nov_args.common.verbose);
    erdkit::DetectionReport report;
    report.novel = erdkit::run_novel(in.recording, in.trials, cfg);
    report.config_json = erdkit::config_to_json(cfg);
    emit(report, nov_args);
    return 0;
  }
  if (compare->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(cmp_args.common.config_path);
    LoadedInput in = load_input(cmp_args.in, cfg, cmp_args.common.verbose);
    const erdkit::DetectionReport report =
        erdkit::run_comparison(in.recording, in.trials, cfg);
    emit(report, cmp_args);
    return 0;
  }
  if (bench->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(bench_args.config_path);
    LoadedInput in = load_input(bench_in, cfg, bench_args.verbose);
    const erdkit::BenchResult result =
        erdkit::run_bench(in.recording, in.trials, cfg);
    const std::string text = erdkit::bench_to_json(result);
    if (bench_out.empty()) {
      std::cout << text;
    } else {
      erdkit::write_text_file(bench_out, text);
      if (bench_args.verbose) std::cerr << "wrote " << bench_out << "\n";
    }
    return 0;
  }
  if (validate->parsed()) {
    erdkit::AnalysisConfig cfg = erdkit::load_config(val_args.config_path);
    std::cout << "config ok\n";
    if (!val_in.empty()) {
      LoadedInput in = load_input(val_in, cfg, val_args.verbose);
      for (const auto& label : cfg.standard.channels) {
        in.recording.channel_index(label);  // throws on missing channels
      }
      for (const auto& pair : cfg.differential_pairs) {
        in.recording.channel_index(pair.pos);
        in.recording.channel_index(pair.neg);
      }
      std::cout << "recording ok: " << in.trials.trials.size() << " trials, "
                << in.trials.n_valid() << " valid\n";
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const erdkit::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
