#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wellfluor/concentration.hpp"
#include "wellfluor/series.hpp"

namespace wellfluor {

struct DetectionCriterion {
  static constexpr double kDefaultMargin = 0.05;

  double margin = kDefaultMargin;  // minimum relative excess over baseline
  bool require_contiguity = true;
};

struct WellDecision {
  int well_index = 0;
  double reading = 0.0;
  double relative_excess = 0.0;  // (reading - baseline) / baseline
  bool detected = false;
  bool excluded = false;
};

struct DetectionResult {
  double baseline = 0.0;
  std::vector<WellDecision> per_well;  // every sample well, in well order
  std::optional<Concentration> lod;    // lowest detected concentration

  const WellDecision* find(int well_index) const;
};

// Sample well w is detected when (reading - blank) / blank >= margin and, with
// contiguity, every non-excluded sample of higher concentration is detected
// too. Errors: NoBlank, NonPositiveBlank, AllExcluded, InvalidArgument.
DetectionResult detection_limit(const MeasurementSeries& series, const DetectionCriterion& criterion = {});

// Same rule against the control well. Errors: NoControl, NonPositiveControl,
// AllExcluded, InvalidArgument.
DetectionResult detect_vs_control(const MeasurementSeries& series, const DetectionCriterion& criterion = {});

struct OrderingValidation {
  std::size_t valid_prefix_len = 0;
  std::optional<int> first_violation;  // well index
};

// High-stock readings must strictly exceed low-stock readings at every sample
// well; ties are violations. Errors: ShapeMismatch.
OrderingValidation validate_group_ordering(const MeasurementSeries& high, const MeasurementSeries& low);

// Marks wells whose molar concentration exceeds device_max_conc, or whose
// saturation fraction (when supplied per well) exceeds the threshold.
MeasurementSeries exclude_saturated(MeasurementSeries series, const std::optional<MolarConcentration>& device_max_conc,
                                    double saturation_threshold,
                                    const std::map<int, double>& saturation_by_well = {});

struct ComparisonRow {
  int well_index = 0;
  double device_reading = 0.0;
  double reference_reading = 0.0;
  double device_rank = 0.0;
  double reference_rank = 0.0;
};

struct ComparisonReport {
  double rho = 0.0;
  std::size_t n = 0;
  std::vector<ComparisonRow> per_well;
};

// Spearman rank correlation (average ranks for ties) over wells that are
// sample or blank and non-excluded in both series.
// Errors: TooFewCommonWells (< 3), InvalidArgument (constant readings).
ComparisonReport compare_with_reference(const MeasurementSeries& device, const MeasurementSeries& reference);

// 1-based average ranks, ascending.
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace wellfluor
