#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wellfluor/quant.hpp"
#include "wellfluor/segmentation.hpp"
#include "wellfluor/series.hpp"

namespace wellfluor {

// Built-in series holding only the numbers printed for the fluorescein run.
MeasurementSeries victor_fluorescein_fixture();
MeasurementSeries device_fluorescein_fixture();
std::vector<std::string_view> fixture_names();
// Throws UnknownFixture listing the known names.
MeasurementSeries fixture(std::string_view name);

// Profile CSV
inline constexpr std::string_view kProfileCsvHeader =
    "well_index,mean_r,mean_g,mean_b,median_g,stddev_g,pixel_count,saturation_fraction";

struct ProfileRow {
  int well_index = 0;
  RgbProfile profile;
};

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);
// Rounded values as written; saturation fractions keyed by well.
std::vector<ProfileRow> parse_profile_csv(std::istream& in);
std::map<int, double> saturation_by_well(const std::vector<ProfileRow>& rows);

// Detection report CSV
inline constexpr std::string_view kDetectionCsvHeader = "well_index,reading,relative_excess,detected";

void write_detection_csv(std::ostream& out, const DetectionResult& result);
std::vector<WellDecision> parse_detection_csv(std::istream& in);
std::string lod_summary(const DetectionResult& result);  // "lod=1e-10" or "lod=none"

// Comparison report CSV
inline constexpr std::string_view kComparisonCsvHeader =
    "well_index,device_reading,reference_reading,device_rank,reference_rank";

void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
std::vector<ComparisonRow> parse_comparison_csv(std::istream& in);
std::string rho_summary(const ComparisonReport& report);  // "rho=0.800 n=4"

// SVG plot: log10 concentration on x, decreasing left to right so points sit
// in well order, reading on y. The blank is drawn one decade past the lowest
// sample in grey.
struct PlotPoint {
  int well_index = 0;
  double x_log10 = 0.0;
  double y = 0.0;
  bool blank = false;
  bool excluded = false;
};

struct PlotSeries {
  std::string label;
  std::vector<PlotPoint> points;
};

struct PlotSpec {
  std::string title;
  std::string y_label = "reading";
  std::vector<PlotSeries> series;  // one or two
  std::optional<double> threshold_y;  // horizontal guide
  std::optional<double> lod_x;        // vertical guide
};

PlotSpec detection_plot(const MeasurementSeries& series, const DetectionResult& result,
                        const DetectionCriterion& criterion);
std::string render_svg(const PlotSpec& plot);

}  // namespace wellfluor
