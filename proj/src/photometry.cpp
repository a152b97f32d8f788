#include "wellfluor/photometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "wellfluor/error.hpp"
#include "wellfluor/kernels.hpp"

namespace wellfluor {

namespace {

// CIE 1931 2-degree observer (public domain tabulation).
constexpr std::array<CmfSample, 81> kCie1931 = {{
    {380, 0.001368, 3.9e-05, 0.006450001},
    {385, 0.002236, 6.4e-05, 0.01054999},
    {390, 0.004243, 0.00012, 0.02005001},
    {395, 0.00765, 0.000217, 0.03621},
    {400, 0.01431, 0.000396, 0.06785001},
    {405, 0.02319, 0.00064, 0.1102},
    {410, 0.04351, 0.00121, 0.2074},
    {415, 0.07763, 0.00218, 0.3713},
    {420, 0.13438, 0.004, 0.6456},
    {425, 0.21477, 0.0073, 1.0390501},
    {430, 0.2839, 0.0116, 1.3856},
    {435, 0.3285, 0.01684, 1.62296},
    {440, 0.34828, 0.023, 1.74706},
    {445, 0.34806, 0.0298, 1.7826},
    {450, 0.3362, 0.038, 1.77211},
    {455, 0.3187, 0.048, 1.7441},
    {460, 0.2908, 0.06, 1.6692},
    {465, 0.2511, 0.0739, 1.5281},
    {470, 0.19536, 0.09098, 1.28764},
    {475, 0.1421, 0.1126, 1.0419},
    {480, 0.09564, 0.13902, 0.8129501},
    {485, 0.05795001, 0.1693, 0.6162},
    {490, 0.03201, 0.20802, 0.46518},
    {495, 0.0147, 0.2586, 0.3533},
    {500, 0.0049, 0.323, 0.272},
    {505, 0.0024, 0.4073, 0.2123},
    {510, 0.0093, 0.503, 0.1582},
    {515, 0.0291, 0.6082, 0.1117},
    {520, 0.06327, 0.71, 0.07824999},
    {525, 0.1096, 0.7932, 0.05725001},
    {530, 0.1655, 0.862, 0.04216},
    {535, 0.2257499, 0.9148501, 0.02984},
    {540, 0.2904, 0.954, 0.0203},
    {545, 0.3597, 0.9803, 0.0134},
    {550, 0.4334499, 0.9949501, 0.008749999},
    {555, 0.5120501, 1, 0.005749999},
    {560, 0.5945, 0.995, 0.0039},
    {565, 0.6784, 0.9786, 0.002749999},
    {570, 0.7621, 0.952, 0.0021},
    {575, 0.8425, 0.9154, 0.0018},
    {580, 0.9163, 0.87, 0.001650001},
    {585, 0.9786, 0.8163, 0.0014},
    {590, 1.0263, 0.757, 0.0011},
    {595, 1.0567, 0.6949, 0.001},
    {600, 1.0622, 0.631, 0.0008},
    {605, 1.0456, 0.5668, 0.0006},
    {610, 1.0026, 0.503, 0.00034},
    {615, 0.9384, 0.4412, 0.00024},
    {620, 0.8544499, 0.381, 0.00019},
    {625, 0.7514, 0.321, 0.0001},
    {630, 0.6424, 0.265, 4.999999e-05},
    {635, 0.5419, 0.217, 3e-05},
    {640, 0.4479, 0.175, 2e-05},
    {645, 0.3608, 0.1382, 1e-05},
    {650, 0.2835, 0.107, 0},
    {655, 0.2187, 0.0816, 0},
    {660, 0.1649, 0.061, 0},
    {665, 0.1212, 0.04458, 0},
    {670, 0.0874, 0.032, 0},
    {675, 0.0636, 0.0232, 0},
    {680, 0.04677, 0.017, 0},
    {685, 0.0329, 0.01192, 0},
    {690, 0.0227, 0.00821, 0},
    {695, 0.01584, 0.005723, 0},
    {700, 0.01135916, 0.004102, 0},
    {705, 0.008110916, 0.002929, 0},
    {710, 0.005790346, 0.002091, 0},
    {715, 0.004109457, 0.001484, 0},
    {720, 0.002899327, 0.001047, 0},
    {725, 0.00204919, 0.00074, 0},
    {730, 0.001439971, 0.00052, 0},
    {735, 0.0009999493, 0.0003611, 0},
    {740, 0.0006900786, 0.0002492, 0},
    {745, 0.0004760213, 0.0001719, 0},
    {750, 0.0003323011, 0.00012, 0},
    {755, 0.0002348261, 8.48e-05, 0},
    {760, 0.0001661505, 6e-05, 0},
    {765, 0.000117413, 4.24e-05, 0},
    {770, 8.307527e-05, 3e-05, 0},
    {775, 5.870652e-05, 2.12e-05, 0},
    {780, 4.150994e-05, 1.499e-05, 0},
}};

// XYZ -> linear sRGB (D65 white).
constexpr double kXyzToRgb[3][3] = {
    {3.2406, -1.5372, -0.4986},
    {-0.9689, 1.8758, 0.0415},
    {0.0557, -0.2040, 1.0570},
};

constexpr double kGamma = 1.0 / 2.2;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 53-bit uniform in (0, 1].
double unit_open_low(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::span<const CmfSample> cie1931_cmf() { return kCie1931; }

Tristimulus interpolate_cmf(double lambda_nm, std::span<const CmfSample> table) {
  if (table.empty() || !(lambda_nm >= table.front().wavelength_nm) || !(lambda_nm <= table.back().wavelength_nm)) {
    throw Error(ErrorCode::OutOfGamutRange, std::to_string(lambda_nm) + " nm is outside the CMF table");
  }
  auto hi = std::lower_bound(table.begin(), table.end(), lambda_nm,
                             [](const CmfSample& s, double w) { return s.wavelength_nm < w; });
  if (hi->wavelength_nm == lambda_nm) return {hi->x_bar, hi->y_bar, hi->z_bar};
  auto lo = hi - 1;
  double t = (lambda_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
  auto lerp = [t](double a, double b) { return a + t * (b - a); };
  return {lerp(lo->x_bar, hi->x_bar), lerp(lo->y_bar, hi->y_bar), lerp(lo->z_bar, hi->z_bar)};
}

Rgb wavelength_to_rgb(double lambda_nm, std::span<const CmfSample> table) {
  Tristimulus xyz = interpolate_cmf(lambda_nm, table);
  std::array<double, 3> linear{};
  for (int c = 0; c < 3; ++c) {
    double v = kXyzToRgb[c][0] * xyz.x + kXyzToRgb[c][1] * xyz.y + kXyzToRgb[c][2] * xyz.z;
    linear[c] = std::max(0.0, v);
  }
  double peak = std::max({linear[0], linear[1], linear[2]});
  if (peak <= 0.0) return {0, 0, 0};
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double encoded = std::pow(linear[c] / peak, kGamma);
    out[c] = static_cast<std::uint8_t>(std::clamp(std::round(255.0 * encoded), 0.0, 255.0));
  }
  return {out[0], out[1], out[2]};
}

std::uint8_t intensity_to_green(double intensity, double gain) {
  if (!(gain > 0.0)) throw Error(ErrorCode::InvalidArgument, "camera gain must be positive");
  if (!(intensity >= 0.0)) throw Error(ErrorCode::InvalidArgument, "intensity must be non-negative");
  double v = 255.0 * -std::expm1(-gain * intensity);
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

EmissionModel::EmissionModel(double emission_nm, double intensity, double excitation_nm)
    : excitation_nm_(excitation_nm), emission_nm_(emission_nm), intensity_(intensity) {
  if (!(emission_nm_ > excitation_nm_)) {
    throw Error(ErrorCode::InvalidArgument, "emission must be red-shifted from excitation");
  }
  double shift = emission_nm_ - excitation_nm_;
  if (shift < 10.0 || shift > 150.0) {
    throw Error(ErrorCode::InvalidArgument, "Stokes shift " + std::to_string(shift) + " nm outside [10, 150]");
  }
  if (!(intensity_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "intensity must be non-negative");
}

Rgb EmissionModel::apparent_rgb(double gain, std::span<const CmfSample> table) const {
  Rgb hue = wavelength_to_rgb(emission_nm_, table);
  double response = intensity_to_green(intensity_, gain) / 255.0;
  auto scale = [response](std::uint8_t c) { return static_cast<std::uint8_t>(std::round(c * response)); };
  return {scale(hue.r), scale(hue.g), scale(hue.b)};
}

void validate(const RenderSpec& spec) {
  auto fail = [](const std::string& what) { return Error(ErrorCode::SpecOutOfBounds, what); };
  if (spec.width < 32 || spec.height < 32) throw fail("frame must be at least 32x32");
  if (!(spec.radius > 0.0)) throw fail("disk radius must be positive");
  if (!(spec.center_x - spec.radius >= 0.0) || !(spec.center_x + spec.radius <= spec.width - 1.0) ||
      !(spec.center_y - spec.radius >= 0.0) || !(spec.center_y + spec.radius <= spec.height - 1.0)) {
    throw fail("disk does not fit inside the frame");
  }
  if (!(spec.noise_stddev >= 0.0) || spec.noise_stddev > RenderSpec::kMaxNoiseStddev) {
    throw fail("noise stddev must lie in [0, 30]");
  }
}

RasterImage render_well_image(const RenderSpec& spec) {
  validate(spec);
  return kernels::render(spec);
}

double pixel_noise(std::uint64_t seed, std::uint64_t pixel_index, unsigned channel) noexcept {
  std::uint64_t key = splitmix64(seed) ^ (pixel_index * 3 + channel) * 0xD1B54A32D192ED03ull;
  double u1 = unit_open_low(splitmix64(key));
  double u2 = unit_open_low(splitmix64(key ^ 0xA0761D6478BD642Full));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace wellfluor
