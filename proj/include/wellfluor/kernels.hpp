#pragma once

#include <array>
#include <cstdint>

#include "wellfluor/image.hpp"
#include "wellfluor/photometry.hpp"

// Pixel-loop kernels behind segmentation, profiling and rendering. Each kernel
// has a serial reference path and an OpenMP path; both accumulate integers
// only, so their results are identical and the tests compare them exactly.
namespace wellfluor::kernels {

enum class Execution { Serial, Parallel };

using Histogram = std::array<std::uint64_t, 256>;

Histogram green_histogram(const RasterImage& image, Execution exec = Execution::Parallel);

struct ForegroundMoments {
  std::uint64_t count = 0;
  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;

  friend bool operator==(const ForegroundMoments&, const ForegroundMoments&) = default;
};

// Pixels whose green channel is strictly above threshold.
ForegroundMoments foreground_moments(const RasterImage& image, std::uint8_t threshold,
                                     Execution exec = Execution::Parallel);

struct DiskSample {
  std::array<Histogram, 3> channels{};  // r, g, b
  std::uint64_t count = 0;
  std::uint64_t saturated = 0;  // pixels with any channel at 255

  friend bool operator==(const DiskSample&, const DiskSample&) = default;
};

// Histograms of every pixel with (x - cx)^2 + (y - cy)^2 <= radius^2.
// Pixels outside the frame are skipped.
DiskSample sample_disk(const RasterImage& image, double cx, double cy, double radius,
                       Execution exec = Execution::Parallel);

// Spec must already be validated.
RasterImage render(const RenderSpec& spec, Execution exec = Execution::Parallel);

}  // namespace wellfluor::kernels
