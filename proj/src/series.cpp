#include "wellfluor/series.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "wellfluor/error.hpp"

namespace wellfluor {

const Record* MeasurementSeries::find(int well_index) const {
  for (const Record& r : records) {
    if (r.well_index == well_index) return &r;
  }
  return nullptr;
}

void validate(const MeasurementSeries& series) {
  const Concentration* previous = nullptr;
  for (std::size_t i = 0; i < series.records.size(); ++i) {
    const Record& r = series.records[i];
    const std::string where = "well " + std::to_string(r.well_index);
    if (i > 0 && r.well_index <= series.records[i - 1].well_index) {
      throw Error(ErrorCode::InvalidArgument, where + ": well indices must be strictly increasing");
    }
    if (!std::isfinite(r.reading) || r.reading < 0.0) {
      throw Error(ErrorCode::InvalidArgument, where + ": reading must be finite and non-negative");
    }
    if ((r.role.kind == RoleKind::Sample) != r.role.concentration.has_value()) {
      throw Error(ErrorCode::InvalidArgument, where + ": only sample wells carry a concentration");
    }
    if (r.role.kind == RoleKind::Sample) {
      if (previous != nullptr && !(compare(*r.role.concentration, *previous) < 0)) {
        throw Error(ErrorCode::InvalidArgument, where + ": sample concentrations must strictly decrease");
      }
      previous = &*r.role.concentration;
    }
  }
}

MeasurementSeries make_series(std::string instrument, const PlateLayout& layout, const std::vector<double>& readings) {
  if (readings.size() != layout.size()) {
    throw Error(ErrorCode::ArityMismatch, std::to_string(readings.size()) + " readings for a " +
                                              std::to_string(layout.size()) + "-well layout");
  }
  MeasurementSeries s{std::move(instrument), {}, {}};
  for (std::size_t i = 0; i < readings.size(); ++i) {
    s.records.push_back({layout.wells()[i].index, layout.wells()[i].role, readings[i], {}});
  }
  validate(s);
  return s;
}

MeasurementSeries parse_series_csv(std::istream& in, std::string instrument) {
  MeasurementSeries series{std::move(instrument), {}, {}};
  std::string line;
  std::string pending_note;
  int line_no = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::ParseError, "series CSV line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      pending_note = std::string(detail::trim(body.substr(1)));
      continue;
    }
    if (!header_seen) {
      if (body != kSeriesCsvHeader) throw fail("expected header '" + std::string(kSeriesCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    auto fields = detail::split(body, ',');
    if (fields.size() != 4) throw fail("expected 4 fields, found " + std::to_string(fields.size()));
    Record rec;
    auto index = detail::parse_number<int>(fields[0]);
    if (!index) throw fail("invalid well_index '" + std::string(fields[0]) + "'");
    rec.well_index = *index;
    try {
      rec.role.kind = parse_role(fields[1]);
    } catch (const Error& e) {
      throw fail(e.detail());
    }
    if (rec.role.kind == RoleKind::Sample) {
      if (fields[2].empty()) throw fail("sample row needs concentration_molar");
      try {
        rec.role.concentration = parse_concentration(fields[2]);
      } catch (const Error& e) {
        throw fail(e.detail());
      }
    } else if (!fields[2].empty()) {
      throw fail("control/blank rows take an empty concentration");
    }
    auto reading = detail::parse_number<double>(fields[3]);
    if (!reading) throw fail("invalid reading '" + std::string(fields[3]) + "'");
    rec.reading = *reading;
    rec.note = std::move(pending_note);
    pending_note.clear();
    series.records.push_back(std::move(rec));
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "series CSV is empty");
  try {
    validate(series);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("series CSV: ") + e.detail());
  }
  return series;
}

MeasurementSeries parse_series_csv(std::string_view text, std::string instrument) {
  std::istringstream in{std::string(text)};
  return parse_series_csv(in, std::move(instrument));
}

void write_series_csv(std::ostream& out, const MeasurementSeries& series) {
  out << kSeriesCsvHeader << '\n';
  for (const Record& r : series.records) {
    if (!r.note.empty()) out << "# " << r.note << '\n';
    out << r.well_index << ',' << to_string(r.role.kind) << ',';
    if (r.role.concentration) out << to_string(*r.role.concentration);
    out << ',' << detail::format_shortest(r.reading) << '\n';
  }
}

std::string series_csv(const MeasurementSeries& series) {
  std::ostringstream out;
  write_series_csv(out, series);
  return out.str();
}

}  // namespace wellfluor
