#pragma once

#include <cstdint>
#include <string>

#include "erdkit/config.hpp"
#include "erdkit/recording.hpp"

namespace erdkit {

// Cost model and wall-clock measurement for both pipelines. Multiply-
// accumulate counts are analytic, derived from the configured filter lengths
// and the spans the implementation actually filters: one causal or zero-phase
// application over N samples with L taps costs N*L MACs, squaring N samples
// costs N, and a radix-2 FFT of size M costs 2*M*log2(M).
struct BenchResult {
  struct Stage {
    std::string name;
    double median_ms_per_trial = 0.0;
  };

  struct Method {
    std::vector<Stage> stages;
    double total_ms_per_trial = 0.0;
    double filter_group_delay_ms = 0.0;
    // Group delay + measured compute for the decision's processing unit
    // (one interval for the streaming method, the full trial offline).
    double decision_latency_ms = 0.0;
    std::int64_t macs_per_trial = 0;
    std::int64_t filter_length = 0;
  };

  Method standard;
  Method novel;
  std::int64_t novel_macs_per_interval = 0;
  int repetitions = 0;
  std::int64_t n_trials = 0;
};

// Median-of-repetitions timings (I/O and synthesis excluded) plus the
// analytic counts. Requires repetitions >= 3 (config.bench.repetitions).
BenchResult run_bench(const Recording& recording, const TrialSet& trials,
                      const AnalysisConfig& config);

std::string bench_to_json(const BenchResult& result);

}  // namespace erdkit
