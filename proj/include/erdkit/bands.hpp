#pragma once

#include <vector>

namespace erdkit {

struct FrequencyBand {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  double width_hz() const { return hi_hz - lo_hz; }
  double center_hz() const { return 0.5 * (lo_hz + hi_hz); }
  bool contains(double f_hz) const { return lo_hz <= f_hz && f_hz < hi_hz; }
  bool overlaps(const FrequencyBand& o) const {
    return lo_hz < o.hi_hz && o.lo_hz < hi_hz;
  }
  bool operator==(const FrequencyBand& o) const = default;
};

// Throws ConfigError on invalid band limits for the given sample rate.
void validate_band(const FrequencyBand& band, double fs_hz);

// Overlapping constant-width bank: bands start at lo, lo+hop, ... while the
// band still fits below hi. Count = floor((hi - lo - width)/hop) + 1.
// Requires lo < hi and 0 < hop < width <= hi - lo; throws ConfigError.
std::vector<FrequencyBand> enumerate_bands(double lo_hz, double hi_hz,
                                           double width_hz, double hop_hz);

}  // namespace erdkit
