#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wellfluor/plate.hpp"

namespace wellfluor {

struct Record {
  int well_index = 0;
  WellRole role;
  double reading = 0.0;
  std::string note;  // free text, carried as a '#' comment line in CSV

  friend bool operator==(const Record&, const Record&) = default;
};

// Per-well readings from one instrument, in well order.
struct MeasurementSeries {
  std::string instrument;
  std::vector<Record> records;
  std::set<int> excluded;

  const Record* find(int well_index) const;
  bool is_excluded(int well_index) const { return excluded.contains(well_index); }

  friend bool operator==(const MeasurementSeries&, const MeasurementSeries&) = default;
};

// Throws InvalidArgument unless well indices strictly increase, readings are
// finite and non-negative, and sample concentrations strictly decrease.
void validate(const MeasurementSeries& series);

// Readings for a layout, one per well in layout order.
MeasurementSeries make_series(std::string instrument, const PlateLayout& layout, const std::vector<double>& readings);

inline constexpr std::string_view kSeriesCsvHeader = "well_index,role,concentration_molar,reading";

// A '#' comment line directly above a row becomes that row's note. Schema
// violations raise ParseError naming the line.
MeasurementSeries parse_series_csv(std::istream& in, std::string instrument = {});
MeasurementSeries parse_series_csv(std::string_view text, std::string instrument = {});
void write_series_csv(std::ostream& out, const MeasurementSeries& series);
std::string series_csv(const MeasurementSeries& series);

}  // namespace wellfluor
