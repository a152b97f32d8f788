#include "wellfluor/plate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "wellfluor/error.hpp"

namespace wellfluor {

std::string_view to_string(RoleKind kind) noexcept {
  switch (kind) {
    case RoleKind::Sample: return "sample";
    case RoleKind::Control: return "control";
    case RoleKind::Blank: return "blank";
  }
  return "?";
}

RoleKind parse_role(std::string_view text) {
  text = detail::trim(text);
  if (text == "sample") return RoleKind::Sample;
  if (text == "control") return RoleKind::Control;
  if (text == "blank" || text == "water") return RoleKind::Blank;
  throw Error(ErrorCode::ParseError, "unknown well role '" + std::string(text) + "'");
}

PlateLayout::PlateLayout(int fold, std::vector<Well> wells) : fold_(fold), wells_(std::move(wells)) {
  if (fold_ < 2) throw Error(ErrorCode::InvalidArgument, "fold must be >= 2");
  int blanks = 0;
  const Concentration* previous = nullptr;
  for (std::size_t i = 0; i < wells_.size(); ++i) {
    const Well& w = wells_[i];
    if (w.index < 1 || w.index > 96) {
      throw Error(ErrorCode::InvalidArgument, "well index " + std::to_string(w.index) + " outside [1, 96]");
    }
    if (i > 0 && w.index <= wells_[i - 1].index) {
      throw Error(ErrorCode::InvalidArgument, "well indices must be strictly increasing");
    }
    if ((w.role.kind == RoleKind::Sample) != w.role.concentration.has_value()) {
      throw Error(ErrorCode::InvalidArgument,
                  "well " + std::to_string(w.index) + ": only sample wells carry a concentration");
    }
    if (w.role.kind == RoleKind::Blank && ++blanks > 1) {
      throw Error(ErrorCode::InvalidArgument, "at most one blank well per layout");
    }
    if (w.role.kind == RoleKind::Sample) {
      if (previous != nullptr && !(compare(*w.role.concentration, *previous) < 0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "well " + std::to_string(w.index) + ": sample concentrations must strictly decrease");
      }
      previous = &*w.role.concentration;
    }
  }
}

const Well& PlateLayout::well(int index) const {
  auto it = std::find_if(wells_.begin(), wells_.end(), [&](const Well& w) { return w.index == index; });
  if (it == wells_.end()) throw Error(ErrorCode::InvalidArgument, "no well " + std::to_string(index) + " in layout");
  return *it;
}

namespace {

template <typename T>
std::vector<T> dilute(const T& stock, int fold, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "dilution count must be >= 1");
  if (fold < 2) throw Error(ErrorCode::InvalidArgument, "dilution fold must be >= 2");
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(stock);
  for (int i = 1; i < count; ++i) out.push_back(out.back().divided_by(fold));
  return out;
}

}  // namespace

std::vector<MolarConcentration> make_dilution_series(const MolarConcentration& stock, int fold, int count) {
  return dilute(stock, fold, count);
}

std::vector<RelativeFactor> make_dilution_series(const RelativeFactor& stock, int fold, int count) {
  return dilute(stock, fold, count);
}

PlateLayout fluorescein_layout() {
  constexpr int kFold = 10;
  auto series = make_dilution_series(MolarConcentration::decade(-1), kFold, 11);
  std::vector<Well> wells;
  for (std::size_t i = 0; i < series.size(); ++i) {
    wells.push_back({static_cast<int>(i) + 1, WellRole::sample(series[i])});
  }
  wells.push_back({12, WellRole::blank()});
  return PlateLayout(kFold, std::move(wells));
}

PlateLayout gfp_layout(std::string_view group_label) {
  constexpr int kFold = 10;
  auto series = make_dilution_series(RelativeFactor::parse(group_label), kFold, 5);
  std::vector<Well> wells;
  for (std::size_t i = 0; i < series.size(); ++i) {
    wells.push_back({static_cast<int>(i) + 1, WellRole::sample(series[i])});
  }
  wells.push_back({6, WellRole::control()});
  wells.push_back({7, WellRole::blank()});
  return PlateLayout(kFold, std::move(wells));
}

PlateLayout parse_layout(std::istream& in) {
  std::optional<int> fold;
  std::vector<Well> wells;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::ParseError, "layout line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = detail::split(body, ',');
    if (fields[0] == "fold") {
      if (fields.size() != 2) throw fail("expected 'fold,<n>'");
      fold = detail::parse_number<int>(fields[1]);
      if (!fold) throw fail("invalid fold '" + std::string(fields[1]) + "'");
    } else if (fields[0] == "well") {
      if (fields.size() < 3 || fields.size() > 4) throw fail("expected 'well,<index>,<role>[,<conc>]'");
      auto index = detail::parse_number<int>(fields[1]);
      if (!index) throw fail("invalid well index '" + std::string(fields[1]) + "'");
      RoleKind kind;
      try {
        kind = parse_role(fields[2]);
      } catch (const Error& e) {
        throw fail(e.detail());
      }
      WellRole role{kind, std::nullopt};
      bool has_conc = fields.size() == 4 && !fields[3].empty();
      if (kind == RoleKind::Sample) {
        if (!has_conc) throw fail("sample well needs a concentration");
        try {
          role.concentration = parse_concentration(fields[3]);
        } catch (const Error& e) {
          throw fail(e.detail());
        }
      } else if (has_conc) {
        throw fail("only sample wells take a concentration");
      }
      wells.push_back({*index, std::move(role)});
    } else {
      throw fail("unknown record '" + std::string(fields[0]) + "'");
    }
  }
  if (!fold) throw Error(ErrorCode::ParseError, "layout is missing its 'fold' line");
  return PlateLayout(*fold, std::move(wells));
}

PlateLayout parse_layout(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_layout(in);
}

void write_layout(std::ostream& out, const PlateLayout& layout) {
  out << "fold," << layout.fold() << '\n';
  for (const Well& w : layout.wells()) {
    out << "well," << w.index << ',' << to_string(w.role.kind);
    if (w.role.concentration) out << ',' << to_string(*w.role.concentration);
    out << '\n';
  }
}

}  // namespace wellfluor
