#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "erdkit/timing.hpp"

namespace erdkit {

// Derivative-threshold detector for electrode-polarization transients.
struct ArtifactParams {
  // Absolute first-difference threshold in uV/sample. When unset, the
  // threshold adapts per sample to threshold_scale x the median absolute
  // first difference over a trailing rolling window.
  std::optional<double> derivative_threshold_uv = std::nullopt;
  double threshold_scale = 8.0;
  double rolling_window_ms = 4000.0;
  int min_consecutive_samples = 3;
  double max_suppression_ms = 1000.0;
  int taper_samples = 16;

  void validate() const;  // throws ConfigError
};

struct ArtifactSpan {
  SampleRange span;
  bool feedback_suspended = true;
};

struct SuppressionResult {
  std::vector<double> cleaned;
  std::vector<ArtifactSpan> spans;
};

// Flags runs of >= min_consecutive_samples with |first difference| above
// threshold, expands each run outward to the nearest zero-crossings of the
// signal, merges overlaps and caps each span at max_suppression_ms.
// Clean signals yield an empty list.
std::vector<ArtifactSpan> detect_artifact_spans(const std::vector<double>& signal,
                                                const ArtifactParams& params,
                                                double fs_hz);

// Zeroes each span outright and fades the taper_samples just outside each
// edge with a raised-cosine ramp, so no step is introduced at the span
// boundary; samples beyond the spans and their tapers are bit-identical to
// the input. Spans must be disjoint and in-range (the detector guarantees
// this); violations are internal errors.
SuppressionResult suppress(const std::vector<double>& signal,
                           const std::vector<ArtifactSpan>& spans,
                           const ArtifactParams& params);

// Convenience: detect + suppress.
SuppressionResult detect_and_suppress(const std::vector<double>& signal,
                                      const ArtifactParams& params, double fs_hz);

}  // namespace erdkit
