#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace erdkit {

enum class Hemisphere { Left, Midline, Right };

struct Electrode {
  std::string label;
  int grid_row = 0;
  int grid_col = 0;
  Hemisphere hemisphere = Hemisphere::Midline;
};

// Electrode layout on a rectangular sensorimotor grid. Hemisphere is derived
// from grid_col relative to midline_col and validated for consistency.
class Montage {
 public:
  Montage() = default;
  // Throws ConfigError on duplicate labels or hemisphere inconsistent with
  // the electrode's grid column.
  Montage(std::vector<Electrode> electrodes, int midline_col);

  const std::vector<Electrode>& electrodes() const { return electrodes_; }
  int midline_col() const { return midline_col_; }
  std::size_t size() const { return electrodes_.size(); }

  bool has(const std::string& label) const;
  // Throws ConfigError for unknown labels.
  std::size_t index_of(const std::string& label) const;
  const Electrode& at(const std::string& label) const;

  // Electrodes on adjacent grid cells (8-neighborhood: horizontal, vertical
  // or diagonal single steps).
  bool adjacent(const std::string& a, const std::string& b) const;

  static Hemisphere hemisphere_for(int grid_col, int midline_col);

 private:
  std::vector<Electrode> electrodes_;
  int midline_col_ = 0;
};

// 16 electrodes over the sensorimotor strip: frontal-central, central and
// central-parietal rows of five plus a parietal midline electrode.
//   row 0: FC3 FC1 FCz FC2 FC4
//   row 1: C3  C1  Cz  C2  C4
//   row 2: CP3 CP1 CPz CP2 CP4
//   row 3:         Pz
Montage default_montage();

enum class PairGroup { LeftSide, InterHemisphere, RightSide };

struct DifferentialPair {
  std::string pos;  // positive electrode label
  std::string neg;  // negative electrode label
  PairGroup group = PairGroup::InterHemisphere;
};

// Group membership implied by electrode positions: both strictly left of the
// midline -> LeftSide, both strictly right -> RightSide, else InterHemisphere.
PairGroup group_for_pair(const Montage& montage, const std::string& a,
                         const std::string& b);

// The default 33-pair nearby-electrode list on default_montage(): all 12
// horizontal and 11 vertical grid-adjacent pairs plus 10 midline-touching
// diagonals. Groups: 7 left, 19 inter-hemisphere, 7 right.
std::vector<DifferentialPair> default_differential_pairs();

// Validates labels exist and (in strict mode) that every pair is grid-adjacent;
// checks declared group matches group_for_pair. Throws ConfigError.
void validate_pairs(const Montage& montage,
                    const std::vector<DifferentialPair>& pairs, bool strict);

const char* to_string(PairGroup g);
const char* to_string(Hemisphere h);

}  // namespace erdkit
