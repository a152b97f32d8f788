#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wellfluor/photometry.hpp"
#include "wellfluor/quant.hpp"
#include "wellfluor/report.hpp"
#include "wellfluor/segmentation.hpp"

namespace wellfluor {

// Settings shared by every subcommand. Defaults are the ones owned by the
// quant and imaging layers.
struct RunConfig {
  double margin = DetectionCriterion::kDefaultMargin;
  bool require_contiguity = true;
  double threshold_percentile = SegmentationParams::kDefaultThresholdPercentile;
  double wall_exclusion = SegmentationParams::kDefaultWallExclusion;
  std::optional<MolarConcentration> device_max_conc;
  double saturation_threshold = 0.01;
  std::filesystem::path output_dir = ".";

  DetectionCriterion criterion() const { return {margin, require_contiguity}; }
  SegmentationParams segmentation() const { return {threshold_percentile, wall_exclusion}; }
};

// Throws InvalidArgument naming the first out-of-range field.
void validate(const RunConfig& config);

// Flat "key = value" file; '#' starts a comment. Keys: margin, contiguity,
// percentile, wall_exclusion, max_conc, saturation_threshold, out.
void apply_config_text(std::string_view text, RunConfig& config);
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

// Built-in names ("fluorescein", "gfp-m", "gfp-n") or a layout file path.
PlateLayout resolve_layout(std::string_view name_or_path);

struct AnalyzeOutput {
  MeasurementSeries series;
  std::vector<ProfileRow> profiles;
};

// One image per layout well, in well order. Writes profiles.csv and
// series.csv into config.output_dir. Failures name the well they belong to.
AnalyzeOutput run_analyze(const std::vector<std::filesystem::path>& images, const PlateLayout& layout,
                          const RunConfig& config);

struct LodOutput {
  MeasurementSeries series;  // after exclusions
  DetectionResult result;
  bool against_control = false;
  std::string summary;  // "lod=..."
};

// Detection against the blank, or against the control when the series has a
// control and no blank. Writes detection.csv and lod.svg.
LodOutput run_lod(const MeasurementSeries& series, const RunConfig& config,
                  const std::map<int, double>& saturation = {});
LodOutput run_lod(const std::filesystem::path& series_csv, const RunConfig& config,
                  const std::optional<std::filesystem::path>& profiles_csv = std::nullopt);

struct CompareOutput {
  ComparisonReport report;
  std::string summary;  // "rho=0.800 n=4"
};

// Writes comparison.csv.
CompareOutput run_compare(const std::filesystem::path& device_csv, const std::filesystem::path& reference_csv,
                          const RunConfig& config);

std::string run_fixtures(std::string_view name);

void run_render(const RenderSpec& spec, const std::filesystem::path& png_path);

}  // namespace wellfluor
