#include "wellfluor/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace wellfluor::kernels {

namespace {

void merge(Histogram& into, const Histogram& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

void merge(DiskSample& into, const DiskSample& from) {
  for (int c = 0; c < 3; ++c) merge(into.channels[c], from.channels[c]);
  into.count += from.count;
  into.saturated += from.saturated;
}

struct RowSpan {
  int x0;
  int x1;  // inclusive; x1 < x0 means empty
};

// Candidate columns for row y; the exact predicate is still applied per pixel.
RowSpan disk_row(double cx, double cy, double radius, int y, int width) {
  double dy = y - cy;
  double half2 = radius * radius - dy * dy;
  if (half2 < 0.0) return {0, -1};
  double half = std::sqrt(half2);
  int x0 = std::max(0, static_cast<int>(std::floor(cx - half)) - 1);
  int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + half)) + 1);
  return {x0, x1};
}

void accumulate_row(const RasterImage& image, double cx, double cy, double r2, int y, RowSpan span,
                    DiskSample& out) {
  double dy = y - cy;
  for (int x = span.x0; x <= span.x1; ++x) {
    double dx = x - cx;
    if (dx * dx + dy * dy > r2) continue;
    const Rgb& p = image.at(x, y);
    ++out.channels[0][p.r];
    ++out.channels[1][p.g];
    ++out.channels[2][p.b];
    ++out.count;
    if (p.r == 255 || p.g == 255 || p.b == 255) ++out.saturated;
  }
}

std::uint8_t quantize(double v) {
  v = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

Rgb shade(const RenderSpec& spec, int x, int y) {
  double dx = x - spec.center_x;
  double dy = y - spec.center_y;
  double d2 = dx * dx + dy * dy;
  double r2 = spec.radius * spec.radius;
  if (d2 > r2) return {0, 0, 0};
  if (spec.wall_ring) {
    double inner = spec.radius * (1.0 - RenderSpec::kWallRingRelativeWidth);
    if (d2 > inner * inner) return *spec.wall_ring;
  }
  return spec.interior;
}

Rgb render_pixel(const RenderSpec& spec, int x, int y) {
  Rgb base = shade(spec, x, y);
  if (spec.noise_stddev <= 0.0) return base;
  auto index = static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(spec.width) + static_cast<std::uint64_t>(x);
  return {quantize(base.r + spec.noise_stddev * pixel_noise(spec.seed, index, 0)),
          quantize(base.g + spec.noise_stddev * pixel_noise(spec.seed, index, 1)),
          quantize(base.b + spec.noise_stddev * pixel_noise(spec.seed, index, 2))};
}

}  // namespace

Histogram green_histogram(const RasterImage& image, Execution exec) {
  Histogram total{};
  const auto pixels = image.pixels();
  const auto n = static_cast<std::int64_t>(pixels.size());
  if (exec == Execution::Serial) {
    for (const Rgb& p : pixels) ++total[p.g];
    return total;
  }
#pragma omp parallel
  {
    Histogram local{};
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) ++local[pixels[i].g];
#pragma omp critical(wellfluor_green_histogram)
    merge(total, local);
  }
  return total;
}

ForegroundMoments foreground_moments(const RasterImage& image, std::uint8_t threshold, Execution exec) {
  const int width = image.width();
  const int height = image.height();
  if (exec == Execution::Serial) {
    ForegroundMoments m;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (image.at(x, y).g > threshold) {
          ++m.count;
          m.sum_x += static_cast<std::uint64_t>(x);
          m.sum_y += static_cast<std::uint64_t>(y);
        }
      }
    }
    return m;
  }
  std::uint64_t count = 0;
  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;
#pragma omp parallel for schedule(static) reduction(+ : count, sum_x, sum_y)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (image.at(x, y).g > threshold) {
        ++count;
        sum_x += static_cast<std::uint64_t>(x);
        sum_y += static_cast<std::uint64_t>(y);
      }
    }
  }
  return {count, sum_x, sum_y};
}

DiskSample sample_disk(const RasterImage& image, double cx, double cy, double radius, Execution exec) {
  DiskSample total;
  const double r2 = radius * radius;
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)) - 1);
  const int y1 = std::min(image.height() - 1, static_cast<int>(std::ceil(cy + radius)) + 1);
  if (exec == Execution::Serial) {
    for (int y = y0; y <= y1; ++y) {
      accumulate_row(image, cx, cy, r2, y, disk_row(cx, cy, radius, y, image.width()), total);
    }
    return total;
  }
#pragma omp parallel
  {
    DiskSample local;
#pragma omp for schedule(static) nowait
    for (int y = y0; y <= y1; ++y) {
      accumulate_row(image, cx, cy, r2, y, disk_row(cx, cy, radius, y, image.width()), local);
    }
#pragma omp critical(wellfluor_sample_disk)
    merge(total, local);
  }
  return total;
}

RasterImage render(const RenderSpec& spec, Execution exec) {
  RasterImage image(spec.width, spec.height);
  const int width = spec.width;
  const int height = spec.height;
  if (exec == Execution::Serial) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) image.at(x, y) = render_pixel(spec, x, y);
    }
    return image;
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) image.at(x, y) = render_pixel(spec, x, y);
  }
  return image;
}

}  // namespace wellfluor::kernels
