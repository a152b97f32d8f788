#include "wellfluor/segmentation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wellfluor/error.hpp"
#include "wellfluor/image_io.hpp"

namespace wellfluor {

namespace {

struct Channel {
  double trimmed_mean;
  double median;
  double stddev;
};

// Value at 0-based rank `rank` of the sorted sample.
int value_at_rank(const kernels::Histogram& h, std::uint64_t rank) {
  std::uint64_t seen = 0;
  for (int v = 0; v < 256; ++v) {
    seen += h[v];
    if (seen > rank) return v;
  }
  return 255;
}

Channel channel_stats(const kernels::Histogram& h, std::uint64_t n) {
  const auto trim = static_cast<std::uint64_t>(std::floor(kTrimFraction * static_cast<double>(n)));
  const std::uint64_t lo = trim;
  const std::uint64_t hi = n - trim;  // keep ranks [lo, hi)

  std::uint64_t rank = 0;
  std::uint64_t trimmed_sum = 0;
  unsigned __int128 sum = 0;
  unsigned __int128 sum_sq = 0;
  for (std::uint64_t v = 0; v < 256; ++v) {
    std::uint64_t c = h[v];
    if (c == 0) continue;
    std::uint64_t a = std::max(rank, lo);
    std::uint64_t b = std::min(rank + c, hi);
    if (b > a) trimmed_sum += (b - a) * v;
    sum += static_cast<unsigned __int128>(c) * v;
    sum_sq += static_cast<unsigned __int128>(c) * v * v;
    rank += c;
  }

  double median = (n % 2 == 1) ? value_at_rank(h, n / 2)
                               : 0.5 * (value_at_rank(h, n / 2 - 1) + value_at_rank(h, n / 2));
  // n^2 * variance = n * sum_sq - sum^2, exact in 128 bits.
  unsigned __int128 scaled_var = static_cast<unsigned __int128>(n) * sum_sq - sum * sum;
  double stddev = std::sqrt(static_cast<double>(scaled_var)) / static_cast<double>(n);
  return {static_cast<double>(trimmed_sum) / static_cast<double>(hi - lo), median, stddev};
}

void require_inside(const RasterImage& image, const WellRoi& roi) {
  double r = roi.effective_radius();
  bool inside = roi.center_x - r >= 0.0 && roi.center_x + r <= image.width() - 1.0 && roi.center_y - r >= 0.0 &&
                roi.center_y + r <= image.height() - 1.0;
  if (!inside) {
    throw Error(ErrorCode::RoiOutOfBounds, "sampling disk at (" + std::to_string(roi.center_x) + ", " +
                                               std::to_string(roi.center_y) + ") r=" + std::to_string(r) +
                                               " leaves the " + std::to_string(image.width()) + "x" +
                                               std::to_string(image.height()) + " frame");
  }
}

}  // namespace

std::uint8_t green_quantile(const RasterImage& image, double p, kernels::Execution exec) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "threshold percentile must lie in (0, 1)");
  if (image.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty image");
  auto hist = kernels::green_histogram(image, exec);
  auto needed = static_cast<std::uint64_t>(std::ceil(p * static_cast<double>(image.size())));
  if (needed == 0) needed = 1;
  return static_cast<std::uint8_t>(value_at_rank(hist, needed - 1));
}

WellRoi locate_well_roi(const RasterImage& image, double threshold_percentile, double wall_exclusion,
                        kernels::Execution exec) {
  if (!(wall_exclusion > 0.0 && wall_exclusion <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "wall exclusion must lie in (0, 1]");
  }
  std::uint8_t threshold = green_quantile(image, threshold_percentile, exec);
  auto m = kernels::foreground_moments(image, threshold, exec);
  if (m.count == 0) {
    throw Error(ErrorCode::NoWellFound, "no pixel has green above " + std::to_string(threshold));
  }
  if (static_cast<double>(m.count) > kMaxForegroundFraction * static_cast<double>(image.size())) {
    throw Error(ErrorCode::NoWellFound, "foreground covers more than 95% of the frame");
  }
  const double n = static_cast<double>(m.count);
  WellRoi roi{static_cast<double>(m.sum_x) / n, static_cast<double>(m.sum_y) / n, std::sqrt(n / std::numbers::pi),
              wall_exclusion};
  require_inside(image, roi);
  return roi;
}

RgbProfile profile_from_sample(const kernels::DiskSample& sample) {
  if (sample.count < kMinRoiPixels) {
    throw Error(ErrorCode::TooFewPixels,
                std::to_string(sample.count) + " pixels sampled, need " + std::to_string(kMinRoiPixels));
  }
  Channel r = channel_stats(sample.channels[0], sample.count);
  Channel g = channel_stats(sample.channels[1], sample.count);
  Channel b = channel_stats(sample.channels[2], sample.count);
  RgbProfile p;
  p.mean = {r.trimmed_mean, g.trimmed_mean, b.trimmed_mean};
  p.median = {r.median, g.median, b.median};
  p.stddev = {r.stddev, g.stddev, b.stddev};
  p.pixel_count = sample.count;
  p.saturation_fraction = static_cast<double>(sample.saturated) / static_cast<double>(sample.count);
  return p;
}

RgbProfile extract_profile(const RasterImage& image, const WellRoi& roi, kernels::Execution exec) {
  if (!(roi.wall_exclusion > 0.0 && roi.wall_exclusion <= 1.0) || !(roi.radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ROI needs radius > 0 and wall exclusion in (0, 1]");
  }
  require_inside(image, roi);
  return profile_from_sample(kernels::sample_disk(image, roi.center_x, roi.center_y, roi.effective_radius(), exec));
}

RgbProfile analyze_well_image(std::span<const std::uint8_t> bytes, const SegmentationParams& params) {
  RasterImage image = load_image(bytes);
  WellRoi roi = locate_well_roi(image, params.threshold_percentile, params.wall_exclusion);
  return extract_profile(image, roi);
}

}  // namespace wellfluor
