#include "wellfluor/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "wellfluor/error.hpp"

namespace wellfluor {

namespace {

MeasurementSeries fluorescein_subseries(std::string instrument, int first_well, const std::vector<double>& readings) {
  const PlateLayout layout = fluorescein_layout();
  MeasurementSeries s{std::move(instrument), {}, {}};
  for (std::size_t i = 0; i < readings.size(); ++i) {
    const Well& w = layout.well(first_well + static_cast<int>(i));
    s.records.push_back({w.index, w.role, readings[i], {}});
  }
  validate(s);
  return s;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Reads the header, then hands each data row's fields to `row`.
template <typename RowFn>
void read_csv(std::istream& in, std::string_view header, std::size_t columns, std::string_view what, RowFn row) {
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body != header) {
        throw Error(ErrorCode::ParseError, std::string(what) + " line " + std::to_string(line_no) +
                                               ": expected header '" + std::string(header) + "'");
      }
      header_seen = true;
      continue;
    }
    auto fields = detail::split(body, ',');
    auto fail = [&](const std::string& msg) {
      return Error(ErrorCode::ParseError, std::string(what) + " line " + std::to_string(line_no) + ": " + msg);
    };
    if (fields.size() != columns) {
      throw fail("expected " + std::to_string(columns) + " fields, found " + std::to_string(fields.size()));
    }
    row(fields, fail);
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, std::string(what) + " is empty");
}

template <typename T, typename Fail>
T field(std::string_view text, const Fail& fail, std::string_view name) {
  auto v = detail::parse_number<T>(text);
  if (!v) throw fail("invalid " + std::string(name) + " '" + std::string(text) + "'");
  return *v;
}

}  // namespace

MeasurementSeries victor_fluorescein_fixture() {
  return fluorescein_subseries("victor", 9, {1364, 1205, 1028, 1083});
}

MeasurementSeries device_fluorescein_fixture() {
  auto s = fluorescein_subseries("device", 7, {100.0, 98.45, 96.89, 88.95, 87.31, 93.85});
  s.records.front().note = "well 7: 100 is a lower bound; the measured green value is only known to exceed 100";
  return s;
}

std::vector<std::string_view> fixture_names() { return {"victor-fluorescein", "device-fluorescein"}; }

MeasurementSeries fixture(std::string_view name) {
  if (name == "victor-fluorescein") return victor_fluorescein_fixture();
  if (name == "device-fluorescein") return device_fluorescein_fixture();
  std::string known;
  for (auto n : fixture_names()) known += (known.empty() ? "" : ", ") + std::string(n);
  throw Error(ErrorCode::UnknownFixture, "'" + std::string(name) + "' (known: " + known + ")");
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
  out << kProfileCsvHeader << '\n';
  for (const ProfileRow& row : rows) {
    const RgbProfile& p = row.profile;
    out << row.well_index << ',' << fixed(p.mean.r, 2) << ',' << fixed(p.mean.g, 2) << ',' << fixed(p.mean.b, 2)
        << ',' << fixed(p.median.g, 2) << ',' << fixed(p.stddev.g, 2) << ',' << p.pixel_count << ','
        << fixed(p.saturation_fraction, 6) << '\n';
  }
}

std::vector<ProfileRow> parse_profile_csv(std::istream& in) {
  std::vector<ProfileRow> rows;
  read_csv(in, kProfileCsvHeader, 8, "profile CSV", [&](const auto& f, const auto& fail) {
    ProfileRow row;
    row.well_index = field<int>(f[0], fail, "well_index");
    row.profile.mean = {field<double>(f[1], fail, "mean_r"), field<double>(f[2], fail, "mean_g"),
                        field<double>(f[3], fail, "mean_b")};
    row.profile.median.g = field<double>(f[4], fail, "median_g");
    row.profile.stddev.g = field<double>(f[5], fail, "stddev_g");
    row.profile.pixel_count = field<std::uint64_t>(f[6], fail, "pixel_count");
    row.profile.saturation_fraction = field<double>(f[7], fail, "saturation_fraction");
    rows.push_back(row);
  });
  return rows;
}

std::map<int, double> saturation_by_well(const std::vector<ProfileRow>& rows) {
  std::map<int, double> out;
  for (const ProfileRow& r : rows) out[r.well_index] = r.profile.saturation_fraction;
  return out;
}

void write_detection_csv(std::ostream& out, const DetectionResult& result) {
  out << kDetectionCsvHeader << '\n';
  for (const WellDecision& d : result.per_well) {
    out << d.well_index << ',' << detail::format_shortest(d.reading) << ',' << fixed(d.relative_excess, 6) << ','
        << (d.detected ? "true" : "false") << '\n';
  }
}

std::vector<WellDecision> parse_detection_csv(std::istream& in) {
  std::vector<WellDecision> rows;
  read_csv(in, kDetectionCsvHeader, 4, "detection CSV", [&](const auto& f, const auto& fail) {
    WellDecision d;
    d.well_index = field<int>(f[0], fail, "well_index");
    d.reading = field<double>(f[1], fail, "reading");
    d.relative_excess = field<double>(f[2], fail, "relative_excess");
    if (f[3] == "true") {
      d.detected = true;
    } else if (f[3] != "false") {
      throw fail("detected must be true or false");
    }
    rows.push_back(d);
  });
  return rows;
}

std::string lod_summary(const DetectionResult& result) {
  return "lod=" + (result.lod ? to_string(*result.lod) : std::string("none"));
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << kComparisonCsvHeader << '\n';
  for (const ComparisonRow& r : report.per_well) {
    out << r.well_index << ',' << detail::format_shortest(r.device_reading) << ','
        << detail::format_shortest(r.reference_reading) << ',' << detail::format_shortest(r.device_rank) << ','
        << detail::format_shortest(r.reference_rank) << '\n';
  }
}

std::vector<ComparisonRow> parse_comparison_csv(std::istream& in) {
  std::vector<ComparisonRow> rows;
  read_csv(in, kComparisonCsvHeader, 5, "comparison CSV", [&](const auto& f, const auto& fail) {
    rows.push_back({field<int>(f[0], fail, "well_index"), field<double>(f[1], fail, "device_reading"),
                    field<double>(f[2], fail, "reference_reading"), field<double>(f[3], fail, "device_rank"),
                    field<double>(f[4], fail, "reference_rank")});
  });
  return rows;
}

std::string rho_summary(const ComparisonReport& report) {
  return "rho=" + fixed(report.rho, 3) + " n=" + std::to_string(report.n);
}

PlotSpec detection_plot(const MeasurementSeries& series, const DetectionResult& result,
                        const DetectionCriterion& criterion) {
  PlotSpec plot;
  plot.title = (series.instrument.empty() ? std::string("series") : series.instrument) + ": " + lod_summary(result);
  PlotSeries line;
  line.label = series.instrument.empty() ? "reading" : series.instrument;
  double lowest = 0.0;
  bool any_sample = false;
  for (const Record& r : series.records) {
    if (r.role.kind != RoleKind::Sample) continue;
    double x = axis_log10(*r.role.concentration);
    lowest = any_sample ? std::min(lowest, x) : x;
    any_sample = true;
    line.points.push_back({r.well_index, x, r.reading, false, series.is_excluded(r.well_index)});
  }
  for (const Record& r : series.records) {
    if (r.role.kind == RoleKind::Blank) {
      line.points.push_back({r.well_index, lowest - 1.0, r.reading, true, false});
    }
  }
  plot.series.push_back(std::move(line));
  plot.threshold_y = result.baseline * (1.0 + criterion.margin);
  if (result.lod) plot.lod_x = axis_log10(*result.lod);
  return plot;
}

std::string render_svg(const PlotSpec& plot) {
  constexpr double kWidth = 640;
  constexpr double kHeight = 400;
  constexpr double kLeft = 70;
  constexpr double kRight = 20;
  constexpr double kTop = 40;
  constexpr double kBottom = 50;
  const char* const kColors[] = {"#1b9e3a", "#1f5fbf"};

  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool first = true;
  for (const auto& s : plot.series) {
    for (const auto& p : s.points) {
      if (first) {
        x_min = x_max = p.x_log10;
        y_min = y_max = p.y;
        first = false;
      }
      x_min = std::min(x_min, p.x_log10);
      x_max = std::max(x_max, p.x_log10);
      y_min = std::min(y_min, p.y);
      y_max = std::max(y_max, p.y);
    }
  }
  if (plot.threshold_y) {
    y_min = std::min(y_min, *plot.threshold_y);
    y_max = std::max(y_max, *plot.threshold_y);
  }
  x_min = std::floor(x_min) - 0.5;
  x_max = std::ceil(x_max) + 0.5;
  double y_pad = (y_max - y_min) * 0.08 + 1e-9;
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  // High concentration on the left.
  auto px = [&](double x) { return kLeft + (x_max - x) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };
  auto num = [](double v) { return fixed(v, 2); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(plot.title) << "</text>\n"
      << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
      << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int decade = static_cast<int>(std::ceil(x_min)); decade <= static_cast<int>(std::floor(x_max)); ++decade) {
    double x = px(decade);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << decade << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    double v = y_min + (y_max - y_min) * i / 4.0;
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 3)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(v) << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 concentration (M)</text>\n"
      << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 16 " << num(kTop + plot_h / 2) << ")\">" << xml_escape(plot.y_label)
      << "</text>\n";

  if (plot.threshold_y) {
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(*plot.threshold_y)) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(py(*plot.threshold_y))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (plot.lod_x) {
    svg << "<line x1=\"" << num(px(*plot.lod_x)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(*plot.lod_x))
        << "\" y2=\"" << num(kTop + plot_h) << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 3\"/>\n";
  }

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& series = plot.series[s];
    const char* color = kColors[s % 2];
    std::string path;
    for (const auto& p : series.points) {
      if (p.blank) continue;
      path += (path.empty() ? "M" : " L") + num(px(p.x_log10)) + " " + num(py(p.y));
    }
    if (!path.empty()) {
      svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& p : series.points) {
      const char* fill = p.blank ? "#9e9e9e" : (p.excluded ? "white" : color);
      svg << "<circle cx=\"" << num(px(p.x_log10)) << "\" cy=\"" << num(py(p.y)) << "\" r=\"4\" fill=\"" << fill
          << "\" stroke=\"" << (p.blank ? "#9e9e9e" : color) << "\"><title>well " << p.well_index << "</title></circle>\n";
    }
    svg << "<text x=\"" << num(kLeft + plot_w - 8) << "\" y=\"" << num(kTop + 16 + 14 * static_cast<double>(s))
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
        << xml_escape(series.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace wellfluor
