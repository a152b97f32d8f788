#include "wellfluor/quant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wellfluor/error.hpp"

namespace wellfluor {

const WellDecision* DetectionResult::find(int well_index) const {
  for (const WellDecision& d : per_well) {
    if (d.well_index == well_index) return &d;
  }
  return nullptr;
}

namespace {

void check(const DetectionCriterion& c) {
  if (!(c.margin > 0.0 && c.margin < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "detection margin must lie in (0, 1)");
  }
}

DetectionResult detect_against(const MeasurementSeries& series, double baseline, const DetectionCriterion& criterion) {
  DetectionResult result;
  result.baseline = baseline;
  const Concentration* lowest = nullptr;
  bool chain_intact = true;
  bool any_candidate = false;
  // Records are validated to have strictly decreasing sample concentration, so
  // well order is the concentration-descending order the contiguity rule needs.
  for (const Record& r : series.records) {
    if (r.role.kind != RoleKind::Sample) continue;
    WellDecision d;
    d.well_index = r.well_index;
    d.reading = r.reading;
    d.relative_excess = (r.reading - baseline) / baseline;
    d.excluded = series.is_excluded(r.well_index);
    if (!d.excluded) {
      any_candidate = true;
      bool passes = d.relative_excess >= criterion.margin;
      d.detected = passes && (!criterion.require_contiguity || chain_intact);
      if (!passes) chain_intact = false;
      if (d.detected) lowest = &*r.role.concentration;
    }
    result.per_well.push_back(d);
  }
  if (!any_candidate) throw Error(ErrorCode::AllExcluded, "every sample well is excluded");
  if (lowest != nullptr) result.lod = *lowest;
  return result;
}

const Record& single_role(const MeasurementSeries& series, RoleKind kind, ErrorCode missing) {
  const Record* found = nullptr;
  for (const Record& r : series.records) {
    if (r.role.kind != kind) continue;
    if (found != nullptr) {
      throw Error(ErrorCode::InvalidArgument, "more than one " + std::string(to_string(kind)) + " well");
    }
    found = &r;
  }
  if (found == nullptr) throw Error(missing, "series has no " + std::string(to_string(kind)) + " well");
  return *found;
}

}  // namespace

DetectionResult detection_limit(const MeasurementSeries& series, const DetectionCriterion& criterion) {
  check(criterion);
  validate(series);
  const Record& blank = single_role(series, RoleKind::Blank, ErrorCode::NoBlank);
  if (!(blank.reading > 0.0)) throw Error(ErrorCode::NonPositiveBlank, "blank reading must be positive");
  return detect_against(series, blank.reading, criterion);
}

DetectionResult detect_vs_control(const MeasurementSeries& series, const DetectionCriterion& criterion) {
  check(criterion);
  validate(series);
  const Record& control = single_role(series, RoleKind::Control, ErrorCode::NoControl);
  if (!(control.reading > 0.0)) throw Error(ErrorCode::NonPositiveControl, "control reading must be positive");
  return detect_against(series, control.reading, criterion);
}

OrderingValidation validate_group_ordering(const MeasurementSeries& high, const MeasurementSeries& low) {
  if (high.records.size() != low.records.size()) {
    throw Error(ErrorCode::ShapeMismatch, "series have different well counts");
  }
  for (std::size_t i = 0; i < high.records.size(); ++i) {
    const Record& h = high.records[i];
    const Record& l = low.records[i];
    if (h.well_index != l.well_index || h.role.kind != l.role.kind) {
      throw Error(ErrorCode::ShapeMismatch, "well " + std::to_string(h.well_index) + " differs between series");
    }
  }
  OrderingValidation out;
  for (std::size_t i = 0; i < high.records.size(); ++i) {
    const Record& h = high.records[i];
    if (h.role.kind != RoleKind::Sample) continue;
    if (!(h.reading > low.records[i].reading)) {
      out.first_violation = h.well_index;
      break;
    }
    ++out.valid_prefix_len;
  }
  return out;
}

MeasurementSeries exclude_saturated(MeasurementSeries series, const std::optional<MolarConcentration>& device_max_conc,
                                    double saturation_threshold, const std::map<int, double>& saturation_by_well) {
  for (const Record& r : series.records) {
    if (device_max_conc && r.role.concentration &&
        compare(*r.role.concentration, Concentration{*device_max_conc}) > 0) {
      series.excluded.insert(r.well_index);
    }
    if (auto it = saturation_by_well.find(r.well_index);
        it != saturation_by_well.end() && it->second > saturation_threshold) {
      series.excluded.insert(r.well_index);
    }
  }
  return series;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

ComparisonReport compare_with_reference(const MeasurementSeries& device, const MeasurementSeries& reference) {
  auto usable = [](const MeasurementSeries& s, const Record& r) {
    return (r.role.kind == RoleKind::Sample || r.role.kind == RoleKind::Blank) && !s.is_excluded(r.well_index);
  };
  ComparisonReport report;
  for (const Record& d : device.records) {
    if (!usable(device, d)) continue;
    const Record* ref = reference.find(d.well_index);
    if (ref == nullptr || !usable(reference, *ref)) continue;
    report.per_well.push_back({d.well_index, d.reading, ref->reading, 0.0, 0.0});
  }
  report.n = report.per_well.size();
  if (report.n < 3) {
    throw Error(ErrorCode::TooFewCommonWells, std::to_string(report.n) + " common wells, need at least 3");
  }
  std::vector<double> dev;
  std::vector<double> ref;
  for (const ComparisonRow& row : report.per_well) {
    dev.push_back(row.device_reading);
    ref.push_back(row.reference_reading);
  }
  auto dev_rank = average_ranks(dev);
  auto ref_rank = average_ranks(ref);
  // Doubled ranks are integers, so the moments below are exact.
  std::int64_t n = static_cast<std::int64_t>(report.n);
  std::int64_t sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < report.n; ++i) {
    report.per_well[i].device_rank = dev_rank[i];
    report.per_well[i].reference_rank = ref_rank[i];
    auto x = static_cast<std::int64_t>(std::lround(2.0 * dev_rank[i]));
    auto y = static_cast<std::int64_t>(std::lround(2.0 * ref_rank[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  std::int64_t cov = n * sxy - sx * sy;
  std::int64_t var_x = n * sxx - sx * sx;
  std::int64_t var_y = n * syy - sy * sy;
  if (var_x == 0 || var_y == 0) {
    throw Error(ErrorCode::InvalidArgument, "rank correlation undefined for constant readings");
  }
  if (var_x == var_y) {
    report.rho = static_cast<double>(cov) / static_cast<double>(var_x);
  } else {
    report.rho = static_cast<double>(cov) / std::sqrt(static_cast<double>(var_x) * static_cast<double>(var_y));
  }
  return report;
}

}  // namespace wellfluor
