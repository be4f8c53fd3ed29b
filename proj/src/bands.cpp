#include "erdkit/bands.hpp"

#include <cmath>
#include <string>

#include "erdkit/errors.hpp"

namespace erdkit {

void validate_band(const FrequencyBand& band, double fs_hz) {
  if (!(band.lo_hz > 0.0) || !(band.lo_hz < band.hi_hz) ||
      !(band.hi_hz < fs_hz / 2.0)) {
    throw ConfigError("invalid frequency band (" + std::to_string(band.lo_hz) +
                      ", " + std::to_string(band.hi_hz) + ") at fs " +
                      std::to_string(fs_hz));
  }
}

std::vector<FrequencyBand> enumerate_bands(double lo_hz, double hi_hz,
                                           double width_hz, double hop_hz) {
  if (!(lo_hz < hi_hz)) {
    throw ConfigError("band range lower edge must be below upper edge");
  }
  if (!(hop_hz > 0.0) || !(hop_hz < width_hz)) {
    throw ConfigError("band hop must satisfy 0 < hop < width");
  }
  if (!(width_hz <= hi_hz - lo_hz)) {
    throw ConfigError("band width exceeds the requested range");
  }
  // Count the starts lo, lo+hop, ... whose band still fits below hi. A hair
  // of tolerance keeps exact-fit banks (like 2 Hz bands every 1 Hz over an
  // 11 Hz range) from losing their last band to floating-point rounding.
  const double slack = 1e-9 * (hi_hz - lo_hz);
  const int count =
      static_cast<int>(std::floor((hi_hz - lo_hz - width_hz + slack) / hop_hz)) + 1;
  std::vector<FrequencyBand> bank;
  bank.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double lo = lo_hz + k * hop_hz;
    bank.push_back(FrequencyBand{lo, lo + width_hz});
  }
  return bank;
}

}  // namespace erdkit
