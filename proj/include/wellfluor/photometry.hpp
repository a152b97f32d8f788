#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "wellfluor/image.hpp"

namespace wellfluor {

struct CmfSample {
  double wavelength_nm;
  double x_bar;
  double y_bar;
  double z_bar;
};

// CIE 1931 2-degree standard observer colour matching functions, 380-780 nm
// in 5 nm steps.
std::span<const CmfSample> cie1931_cmf();

struct Tristimulus {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Linear interpolation into a strictly increasing table. Throws
// OutOfGamutRange when lambda lies outside the table.
Tristimulus interpolate_cmf(double lambda_nm, std::span<const CmfSample> table);

// XYZ -> linear sRGB primaries -> clamp negatives -> scale so the largest
// channel is 1 -> gamma 1/2.2 -> 8 bit. All-zero tristimulus maps to black.
Rgb wavelength_to_rgb(double lambda_nm, std::span<const CmfSample> table = cie1931_cmf());

// Saturating camera response: round(255 * (1 - exp(-gain * intensity))).
std::uint8_t intensity_to_green(double intensity, double gain);

// Fluorophore excitation/emission pair; constructor rejects Stokes shifts
// outside [10, 150] nm.
class EmissionModel {
 public:
  static constexpr double kDefaultExcitationNm = 400.0;

  EmissionModel(double emission_nm, double intensity, double excitation_nm = kDefaultExcitationNm);

  double excitation_nm() const noexcept { return excitation_nm_; }
  double emission_nm() const noexcept { return emission_nm_; }
  double intensity() const noexcept { return intensity_; }
  double stokes_shift_nm() const noexcept { return emission_nm_ - excitation_nm_; }

  // Hue of the emission line scaled by the camera response to its intensity.
  Rgb apparent_rgb(double gain, std::span<const CmfSample> table = cie1931_cmf()) const;

 private:
  double excitation_nm_;
  double emission_nm_;
  double intensity_;
};

struct RenderSpec {
  static constexpr double kWallRingRelativeWidth = 0.15;
  static constexpr double kMaxNoiseStddev = 30.0;

  int width = 256;
  int height = 256;
  double center_x = 128.0;
  double center_y = 128.0;
  double radius = 40.0;
  Rgb interior{0, 200, 0};
  // Painted over the outer 15% of the disk radius when set.
  std::optional<Rgb> wall_ring;
  double noise_stddev = 0.0;
  std::uint64_t seed = 0;
};

// Throws SpecOutOfBounds unless the disk lies inside the frame, the frame is
// at least 32 px on each side, and 0 <= noise_stddev <= 30.
void validate(const RenderSpec& spec);

RasterImage render_well_image(const RenderSpec& spec);

// Standard normal variate for one (pixel, channel) slot. Counter based: two
// SplitMix64 outputs keyed on seed and slot feed a Box-Muller transform, so any
// pixel can be generated independently and in any order.
double pixel_noise(std::uint64_t seed, std::uint64_t pixel_index, unsigned channel) noexcept;

}  // namespace wellfluor
