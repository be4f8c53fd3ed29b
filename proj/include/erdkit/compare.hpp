#pragma once

#include "erdkit/config.hpp"
#include "erdkit/recording.hpp"
#include "erdkit/report.hpp"

namespace erdkit {

// Runs both pipelines on the same trial set and fills the aligned summary.
// Throws InputError when no trial is valid for either method.
DetectionReport run_comparison(const Recording& recording,
                               const TrialSet& trials,
                               const AnalysisConfig& config);

}  // namespace erdkit
