// wellfluor: well-plate fluorescence quantification from camera images.
//
//   wellfluor analyze --layout fluorescein img01.png ... img12.png --out run1
//   wellfluor lod run1/series.csv --max-conc 1e-3
//   wellfluor compare device.csv victor.csv
//   wellfluor fixtures victor-fluorescein > victor.csv
//   wellfluor render --green 200 --seed 42 -o well.png

#include <cstdio>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wellfluor/commands.hpp"
#include "wellfluor/error.hpp"
#include "wellfluor/image_io.hpp"

namespace {

using wellfluor::Error;
using wellfluor::ErrorCode;

std::optional<wellfluor::Rgb> parse_rgb(const std::string& text) {
  unsigned r = 0, g = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%u,%u,%u%c", &r, &g, &b, &tail) != 3 || r > 255 || g > 255 || b > 255) {
    return std::nullopt;
  }
  return wellfluor::Rgb{static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluorescence quantification from well-plate photographs"};
  app.require_subcommand(1);

  // Flags are collected raw so that a config file can be applied first and the
  // command line then takes precedence.
  std::optional<std::string> config_path;
  std::optional<double> margin, percentile, wall_exclusion, saturation_threshold;
  std::optional<std::string> max_conc, out_dir;
  bool no_contiguity = false;

  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--margin", margin, "relative detection margin over baseline (default 0.05)");
  app.add_option("--percentile", percentile, "green quantile used as segmentation threshold (default 0.90)");
  app.add_option("--wall-exclusion", wall_exclusion, "fraction of the well radius sampled (default 0.80)");
  app.add_option("--max-conc", max_conc, "exclude wells above this molar concentration");
  app.add_option("--saturation-threshold", saturation_threshold,
                 "exclude wells whose saturated-pixel fraction exceeds this (default 0.01)");
  app.add_flag("--no-contiguity", no_contiguity, "judge each well independently of higher concentrations");
  app.add_option("--out", out_dir, "output directory (default .)");

  auto* analyze = app.add_subcommand("analyze", "profile one image per well and build a measurement series");
  std::string layout_name = "fluorescein";
  std::vector<std::string> images;
  analyze->add_option("--layout", layout_name, "fluorescein | gfp-m | gfp-n | layout file")->capture_default_str();
  analyze->add_option("images", images, "well images in well order")->required();

  auto* lod = app.add_subcommand("lod", "limit of detection for a series CSV");
  std::string series_csv;
  std::optional<std::string> profiles_csv;
  lod->add_option("series", series_csv, "series CSV")->required();
  lod->add_option("--profiles", profiles_csv, "profile CSV supplying saturation fractions");

  auto* compare = app.add_subcommand("compare", "rank agreement between device and reference series");
  std::string device_csv, reference_csv;
  compare->add_option("device", device_csv, "device series CSV")->required();
  compare->add_option("reference", reference_csv, "reference series CSV")->required();

  auto* fixtures = app.add_subcommand("fixtures", "print a built-in series as CSV");
  std::string fixture_name;
  std::optional<std::string> fixture_out;
  fixtures->add_option("name", fixture_name, "victor-fluorescein | device-fluorescein")->required();
  fixtures->add_option("-o,--output", fixture_out, "write to file instead of stdout");

  auto* render = app.add_subcommand("render", "render a synthetic well image as PNG");
  wellfluor::RenderSpec spec;
  std::optional<double> cx, cy;
  int red = 0, green = 200, blue = 0;
  std::optional<std::string> ring;
  std::string png_out;
  render->add_option("--width", spec.width)->capture_default_str();
  render->add_option("--height", spec.height)->capture_default_str();
  render->add_option("--cx", cx, "disk centre x (default frame centre)");
  render->add_option("--cy", cy, "disk centre y (default frame centre)");
  render->add_option("--radius", spec.radius)->capture_default_str();
  render->add_option("--red", red)->check(CLI::Range(0, 255))->capture_default_str();
  render->add_option("--green", green)->check(CLI::Range(0, 255))->capture_default_str();
  render->add_option("--blue", blue)->check(CLI::Range(0, 255))->capture_default_str();
  render->add_option("--ring", ring, "wall ring colour R,G,B");
  render->add_option("--noise", spec.noise_stddev, "per-channel Gaussian sigma")->capture_default_str();
  render->add_option("--seed", spec.seed)->capture_default_str();
  render->add_option("-o,--output", png_out, "PNG path")->required();

  for (auto* sub : {analyze, lod, compare, fixtures, render}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    wellfluor::RunConfig config;
    if (config_path) wellfluor::apply_config_file(*config_path, config);
    if (margin) config.margin = *margin;
    if (percentile) config.threshold_percentile = *percentile;
    if (wall_exclusion) config.wall_exclusion = *wall_exclusion;
    if (saturation_threshold) config.saturation_threshold = *saturation_threshold;
    if (max_conc) config.device_max_conc = wellfluor::MolarConcentration::parse(*max_conc);
    if (no_contiguity) config.require_contiguity = false;
    if (out_dir) config.output_dir = *out_dir;
    wellfluor::validate(config);

    if (*analyze) {
      std::vector<std::filesystem::path> paths(images.begin(), images.end());
      auto result = wellfluor::run_analyze(paths, wellfluor::resolve_layout(layout_name), config);
      std::cout << wellfluor::series_csv(result.series);
    } else if (*lod) {
      std::optional<std::filesystem::path> profiles;
      if (profiles_csv) profiles = *profiles_csv;
      auto result = wellfluor::run_lod(std::filesystem::path(series_csv), config, profiles);
      std::cout << result.summary << '\n';
    } else if (*compare) {
      auto result = wellfluor::run_compare(device_csv, reference_csv, config);
      std::cout << result.summary << '\n';
    } else if (*fixtures) {
      std::string csv = wellfluor::run_fixtures(fixture_name);
      if (fixture_out) {
        wellfluor::write_file(*fixture_out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
      } else {
        std::cout << csv;
      }
    } else if (*render) {
      spec.center_x = cx.value_or((spec.width - 1) / 2.0);
      spec.center_y = cy.value_or((spec.height - 1) / 2.0);
      spec.interior = {static_cast<std::uint8_t>(red), static_cast<std::uint8_t>(green),
                       static_cast<std::uint8_t>(blue)};
      if (ring) {
        spec.wall_ring = parse_rgb(*ring);
        if (!spec.wall_ring) throw Error(ErrorCode::InvalidArgument, "--ring expects R,G,B with values in [0, 255]");
      }
      wellfluor::run_render(spec, png_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "wellfluor: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
