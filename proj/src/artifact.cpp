#include "erdkit/artifact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "erdkit/errors.hpp"

namespace erdkit {

namespace {

// Median of |first differences| over [begin, end); returns 0 for empty input.
double median_abs_diff(const std::vector<double>& abs_diff, std::size_t begin,
                       std::size_t end) {
  if (begin >= end) return 0.0;
  std::vector<double> scratch(abs_diff.begin() + static_cast<std::ptrdiff_t>(begin),
                              abs_diff.begin() + static_cast<std::ptrdiff_t>(end));
  const std::size_t mid = scratch.size() / 2;
  std::nth_element(scratch.begin(),
                   scratch.begin() + static_cast<std::ptrdiff_t>(mid),
                   scratch.end());
  double hi = scratch[mid];
  if (scratch.size() % 2 == 0) {
    const double lo =
        *std::max_element(scratch.begin(),
                          scratch.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
  }
  return hi;
}

bool same_sign(double a, double b) { return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0); }

}  // namespace

void ArtifactParams::validate() const {
  if (derivative_threshold_uv && !(*derivative_threshold_uv > 0.0)) {
    throw ConfigError("artifact.derivative_threshold_uv must be positive");
  }
  if (!(threshold_scale > 0.0)) {
    throw ConfigError("artifact.threshold_scale must be positive");
  }
  if (!(rolling_window_ms > 0.0)) {
    throw ConfigError("artifact.rolling_window_ms must be positive");
  }
  if (min_consecutive_samples < 1) {
    throw ConfigError("artifact.min_consecutive_samples must be at least 1");
  }
  if (!(max_suppression_ms > 0.0)) {
    throw ConfigError("artifact.max_suppression_ms must be positive");
  }
  if (taper_samples < 0) {
    throw ConfigError("artifact.taper_samples must be nonnegative");
  }
}

std::vector<ArtifactSpan> detect_artifact_spans(const std::vector<double>& signal,
                                                const ArtifactParams& params,
                                                double fs_hz) {
  params.validate();
  if (!(fs_hz > 0.0)) throw ConfigError("sample rate must be positive");
  const std::size_t n = signal.size();
  if (n < 2) return {};

  std::vector<double> abs_diff(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    abs_diff[i] = std::abs(signal[i] - signal[i - 1]);
  }

  // Per-sample threshold. The adaptive variant refreshes block-wise from the
  // trailing window of |diffs| so late samples never see future data; the very
  // first block has no history yet and borrows its own samples.
  std::vector<double> threshold(n);
  if (params.derivative_threshold_uv) {
    std::fill(threshold.begin(), threshold.end(), *params.derivative_threshold_uv);
  } else {
    const auto window =
        static_cast<std::size_t>(ms_to_samples(params.rolling_window_ms, fs_hz));
    const std::size_t block = 256;
    for (std::size_t start = 0; start < n; start += block) {
      const std::size_t stop = std::min(start + block, n);
      std::size_t hist_begin = start > window ? start - window : 0;
      std::size_t hist_end = start;
      if (hist_end == 0) hist_end = stop;  // bootstrap the first block
      const double med = median_abs_diff(abs_diff, hist_begin, hist_end);
      const double thr = params.threshold_scale * std::max(med, 1e-12);
      std::fill(threshold.begin() + static_cast<std::ptrdiff_t>(start),
                threshold.begin() + static_cast<std::ptrdiff_t>(stop), thr);
    }
  }

  // Runs of consecutive over-threshold first differences.
  std::vector<SampleRange> raw;
  std::size_t run_begin = 0;
  std::size_t run_len = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool over = i < n && abs_diff[i] > threshold[i];
    if (over) {
      if (run_len == 0) run_begin = i;
      ++run_len;
    } else if (run_len > 0) {
      if (run_len >= static_cast<std::size_t>(params.min_consecutive_samples)) {
        // Diff index i covers the step from sample i-1 to i; the raw support
        // in signal samples is [run_begin - 1, run_end].
        raw.push_back({static_cast<std::int64_t>(run_begin) - 1,
                       static_cast<std::int64_t>(run_begin + run_len)});
      }
      run_len = 0;
    }
  }
  if (raw.empty()) return {};

  // Expand each run outward to the nearest zero-crossings of the signal.
  const std::int64_t last = static_cast<std::int64_t>(n);
  std::vector<SampleRange> expanded;
  for (const auto& r : raw) {
    std::int64_t b = std::max<std::int64_t>(r.begin, 0);
    while (b > 0 && same_sign(signal[static_cast<std::size_t>(b - 1)],
                              signal[static_cast<std::size_t>(b)])) {
      --b;
    }
    std::int64_t e = std::min<std::int64_t>(r.end, last);
    while (e < last &&
           same_sign(signal[static_cast<std::size_t>(e - 1)],
                     signal[static_cast<std::size_t>(e)])) {
      ++e;
    }
    expanded.push_back({b, e});
  }

  std::sort(expanded.begin(), expanded.end(),
            [](const SampleRange& a, const SampleRange& b) {
              return a.begin < b.begin;
            });
  std::vector<SampleRange> merged;
  for (const auto& r : expanded) {
    if (!merged.empty() && r.begin <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, r.end);
    } else {
      merged.push_back(r);
    }
  }

  const std::int64_t cap = ms_to_samples(params.max_suppression_ms, fs_hz);
  std::vector<ArtifactSpan> out;
  for (auto r : merged) {
    if (r.length() > cap) r.end = r.begin + cap;
    out.push_back({r, true});
  }
  return out;
}

SuppressionResult suppress(const std::vector<double>& signal,
                           const std::vector<ArtifactSpan>& spans,
                           const ArtifactParams& params) {
  params.validate();
  SuppressionResult result;
  result.cleaned = signal;
  result.spans = spans;
  const auto n = static_cast<std::int64_t>(signal.size());
  std::int64_t prev_end = 0;
  for (const auto& s : spans) {
    internal_check(s.span.begin >= prev_end && s.span.end <= n &&
                       s.span.begin < s.span.end,
                   "suppression spans must be disjoint, ordered and in-range");
    prev_end = s.span.end;
    // The span itself is zeroed outright: any gain on span samples would pass
    // a fraction of the transient back through (it can sit arbitrarily close
    // to the zero-crossing edge), re-triggering the detector. The cosine
    // ramps live on the taper_samples just outside each edge, where the
    // signal is ordinary; they rise from ~0 next to the span to ~1 at the
    // outer end so no new step is introduced on either side.
    std::fill(result.cleaned.begin() + s.span.begin,
              result.cleaned.begin() + s.span.end, 0.0);
    const std::int64_t taper = params.taper_samples;
    for (std::int64_t d = 1; d <= taper; ++d) {
      const double gain =
          0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(d) /
                                static_cast<double>(taper + 1)));
      const std::int64_t left = s.span.begin - d;
      if (left >= 0) result.cleaned[static_cast<std::size_t>(left)] *= gain;
      const std::int64_t right = s.span.end - 1 + d;
      if (right < n) result.cleaned[static_cast<std::size_t>(right)] *= gain;
    }
  }
  return result;
}

SuppressionResult detect_and_suppress(const std::vector<double>& signal,
                                      const ArtifactParams& params,
                                      double fs_hz) {
  return suppress(signal, detect_artifact_spans(signal, params, fs_hz), params);
}

}  // namespace erdkit
