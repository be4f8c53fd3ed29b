#include "erdkit/montage.hpp"

#include <cstdlib>
#include <set>

#include "erdkit/errors.hpp"

namespace erdkit {

Hemisphere Montage::hemisphere_for(int grid_col, int midline_col) {
  if (grid_col < midline_col) return Hemisphere::Left;
  if (grid_col > midline_col) return Hemisphere::Right;
  return Hemisphere::Midline;
}

Montage::Montage(std::vector<Electrode> electrodes, int midline_col)
    : electrodes_(std::move(electrodes)), midline_col_(midline_col) {
  std::set<std::string> seen;
  for (const auto& e : electrodes_) {
    if (!seen.insert(e.label).second) {
      throw ConfigError("duplicate electrode label: " + e.label);
    }
    if (e.hemisphere != hemisphere_for(e.grid_col, midline_col_)) {
      throw ConfigError("electrode " + e.label +
                        " hemisphere inconsistent with its grid column");
    }
  }
}

bool Montage::has(const std::string& label) const {
  for (const auto& e : electrodes_) {
    if (e.label == label) return true;
  }
  return false;
}

std::size_t Montage::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < electrodes_.size(); ++i) {
    if (electrodes_[i].label == label) return i;
  }
  throw ConfigError("unknown electrode label: " + label);
}

const Electrode& Montage::at(const std::string& label) const {
  return electrodes_[index_of(label)];
}

bool Montage::adjacent(const std::string& a, const std::string& b) const {
  const Electrode& ea = at(a);
  const Electrode& eb = at(b);
  const int dr = std::abs(ea.grid_row - eb.grid_row);
  const int dc = std::abs(ea.grid_col - eb.grid_col);
  return (dr <= 1 && dc <= 1) && !(dr == 0 && dc == 0);
}

Montage default_montage() {
  const int midline = 2;
  std::vector<Electrode> es;
  const char* rows[3][5] = {
      {"FC3", "FC1", "FCz", "FC2", "FC4"},
      {"C3", "C1", "Cz", "C2", "C4"},
      {"CP3", "CP1", "CPz", "CP2", "CP4"},
  };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      es.push_back({rows[r][c], r, c, Montage::hemisphere_for(c, midline)});
    }
  }
  es.push_back({"Pz", 3, midline, Hemisphere::Midline});
  return Montage(std::move(es), midline);
}

PairGroup group_for_pair(const Montage& montage, const std::string& a,
                         const std::string& b) {
  const int mid = montage.midline_col();
  const int ca = montage.at(a).grid_col;
  const int cb = montage.at(b).grid_col;
  if (ca < mid && cb < mid) return PairGroup::LeftSide;
  if (ca > mid && cb > mid) return PairGroup::RightSide;
  return PairGroup::InterHemisphere;
}

std::vector<DifferentialPair> default_differential_pairs() {
  const Montage m = default_montage();
  std::vector<DifferentialPair> pairs;
  auto label_at = [&m](int r, int c) -> std::string {
    for (const auto& e : m.electrodes()) {
      if (e.grid_row == r && e.grid_col == c) return e.label;
    }
    return {};
  };
  auto add = [&](const std::string& a, const std::string& b) {
    pairs.push_back({a, b, group_for_pair(m, a, b)});
  };
  for (int r = 0; r < 3; ++r) {  // horizontal neighbors (12)
    for (int c = 0; c < 4; ++c) add(label_at(r, c), label_at(r, c + 1));
  }
  for (int c = 0; c < 5; ++c) {  // vertical neighbors (10)
    for (int r = 0; r < 2; ++r) add(label_at(r, c), label_at(r + 1, c));
  }
  add("CPz", "Pz");  // 11th vertical
  // Midline-touching diagonals (10) to complete the 33-pair set.
  add("FC1", "Cz");
  add("FCz", "C1");
  add("FCz", "C2");
  add("FC2", "Cz");
  add("C1", "CPz");
  add("Cz", "CP1");
  add("Cz", "CP2");
  add("C2", "CPz");
  add("CP1", "Pz");
  add("CP2", "Pz");
  internal_check(pairs.size() == 33, "default differential pair count");
  return pairs;
}

void validate_pairs(const Montage& montage,
                    const std::vector<DifferentialPair>& pairs, bool strict) {
  for (const auto& p : pairs) {
    if (!montage.has(p.pos) || !montage.has(p.neg)) {
      throw ConfigError("differential pair uses unknown electrode: " + p.pos +
                        "-" + p.neg);
    }
    if (p.pos == p.neg) {
      throw ConfigError("differential pair repeats electrode " + p.pos);
    }
    if (strict && !montage.adjacent(p.pos, p.neg)) {
      throw ConfigError("differential pair not grid-adjacent: " + p.pos + "-" +
                        p.neg);
    }
    if (p.group != group_for_pair(montage, p.pos, p.neg)) {
      throw ConfigError("differential pair " + p.pos + "-" + p.neg +
                        " declared group inconsistent with electrode sides");
    }
  }
}

const char* to_string(PairGroup g) {
  switch (g) {
    case PairGroup::LeftSide: return "left";
    case PairGroup::InterHemisphere: return "inter";
    case PairGroup::RightSide: return "right";
  }
  return "?";
}

const char* to_string(Hemisphere h) {
  switch (h) {
    case Hemisphere::Left: return "left";
    case Hemisphere::Midline: return "midline";
    case Hemisphere::Right: return "right";
  }
  return "?";
}

}  // namespace erdkit
