#pragma once

#include <cstdint>
#include <span>

#include "wellfluor/image.hpp"
#include "wellfluor/kernels.hpp"

namespace wellfluor {

struct WellRoi {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double wall_exclusion = 1.0;  // fraction of radius actually sampled

  double effective_radius() const noexcept { return radius * wall_exclusion; }
};

struct ChannelStats {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

struct RgbProfile {
  ChannelStats mean;  // 10% two-sided trimmed mean
  ChannelStats median;
  ChannelStats stddev;  // population, over all sampled pixels
  std::uint64_t pixel_count = 0;
  double saturation_fraction = 0.0;

  friend bool operator==(const RgbProfile&, const RgbProfile&) = default;
};

struct SegmentationParams {
  static constexpr double kDefaultThresholdPercentile = 0.90;
  static constexpr double kDefaultWallExclusion = 0.80;

  double threshold_percentile = kDefaultThresholdPercentile;
  double wall_exclusion = kDefaultWallExclusion;
};

inline constexpr double kTrimFraction = 0.10;
inline constexpr std::uint64_t kMinRoiPixels = 16;
inline constexpr double kMaxForegroundFraction = 0.95;

// Nearest-rank quantile of the green channel: the smallest value v such that
// at least ceil(p * N) pixels have green <= v.
std::uint8_t green_quantile(const RasterImage& image, double p,
                            kernels::Execution exec = kernels::Execution::Parallel);

// Threshold at the green quantile, keep pixels strictly above it, and fit the
// equal-area circle at their centroid.
// Errors: InvalidArgument (parameters), NoWellFound (empty foreground or one
// covering more than 95% of the frame), RoiOutOfBounds (sampled disk leaves
// the frame).
WellRoi locate_well_roi(const RasterImage& image, double threshold_percentile, double wall_exclusion,
                        kernels::Execution exec = kernels::Execution::Parallel);

// Errors: RoiOutOfBounds, TooFewPixels (fewer than 16 sampled pixels).
RgbProfile extract_profile(const RasterImage& image, const WellRoi& roi,
                           kernels::Execution exec = kernels::Execution::Parallel);

RgbProfile analyze_well_image(std::span<const std::uint8_t> bytes, const SegmentationParams& params = {});

// Profile statistics from a histogram sample. Exposed for testing.
RgbProfile profile_from_sample(const kernels::DiskSample& sample);

}  // namespace wellfluor
