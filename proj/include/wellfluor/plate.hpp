#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wellfluor/concentration.hpp"

namespace wellfluor {

enum class RoleKind { Sample, Control, Blank };

std::string_view to_string(RoleKind kind) noexcept;
RoleKind parse_role(std::string_view text);

struct WellRole {
  RoleKind kind = RoleKind::Blank;
  std::optional<Concentration> concentration;  // set iff kind == Sample

  static WellRole sample(Concentration c) { return {RoleKind::Sample, std::move(c)}; }
  static WellRole control() { return {RoleKind::Control, std::nullopt}; }
  static WellRole blank() { return {RoleKind::Blank, std::nullopt}; }

  friend bool operator==(const WellRole&, const WellRole&) = default;
};

struct Well {
  int index = 0;  // 1-based
  WellRole role;

  friend bool operator==(const Well&, const Well&) = default;
};

// A single dilution run laid out along a plate row.
class PlateLayout {
 public:
  // Throws InvalidArgument unless indices are strictly increasing in [1, 96],
  // fold >= 2, and sample concentrations strictly decrease with well index.
  PlateLayout(int fold, std::vector<Well> wells);

  int fold() const noexcept { return fold_; }
  const std::vector<Well>& wells() const noexcept { return wells_; }
  std::size_t size() const noexcept { return wells_.size(); }

  // Throws InvalidArgument when the index is not part of the layout.
  const Well& well(int index) const;

  friend bool operator==(const PlateLayout&, const PlateLayout&) = default;

 private:
  int fold_;
  std::vector<Well> wells_;
};

std::vector<MolarConcentration> make_dilution_series(const MolarConcentration& stock, int fold, int count);
std::vector<RelativeFactor> make_dilution_series(const RelativeFactor& stock, int fold, int count);

// Row of 12: 100 mM stock diluted 10-fold across wells 1-11, water in well 12.
PlateLayout fluorescein_layout();

// Row of 7: stock symbol diluted 10-fold across wells 1-5, control yeast in 6, water in 7.
PlateLayout gfp_layout(std::string_view group_label);

// Line-oriented text format: "fold,<n>" then "well,<index>,<role>[,<conc>]".
// Blank lines and '#' comments are ignored.
PlateLayout parse_layout(std::istream& in);
PlateLayout parse_layout(std::string_view text);
void write_layout(std::ostream& out, const PlateLayout& layout);

}  // namespace wellfluor
