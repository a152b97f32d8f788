#include "wellfluor/commands.hpp"

#include <exception>
#include <fstream>
#include <sstream>

#include "text_util.hpp"
#include "wellfluor/error.hpp"
#include "wellfluor/image_io.hpp"

namespace wellfluor {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::ParseError, "expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { return Error(ErrorCode::InvalidArgument, what); };
  if (!(c.margin > 0.0 && c.margin < 1.0)) throw fail("margin must lie in (0, 1)");
  if (!(c.threshold_percentile > 0.0 && c.threshold_percentile < 1.0)) throw fail("percentile must lie in (0, 1)");
  if (!(c.wall_exclusion > 0.0 && c.wall_exclusion <= 1.0)) throw fail("wall exclusion must lie in (0, 1]");
  if (!(c.saturation_threshold >= 0.0 && c.saturation_threshold <= 1.0)) {
    throw fail("saturation threshold must lie in [0, 1]");
  }
}

void apply_config_text(std::string_view text, RunConfig& config) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;
    auto eq = body.find('=');
    auto fail = [&](const std::string& what) {
      return Error(ErrorCode::ParseError, "config line " + std::to_string(line_no) + ": " + what);
    };
    if (eq == std::string_view::npos) throw fail("expected 'key = value'");
    std::string_view key = detail::trim(body.substr(0, eq));
    std::string_view value = detail::trim(body.substr(eq + 1));
    auto number = [&]() {
      auto v = detail::parse_number<double>(value);
      if (!v) throw fail("'" + std::string(key) + "' needs a number");
      return *v;
    };
    auto wrapped = [&](auto parse) {
      try {
        return parse();
      } catch (const Error& e) {
        throw fail(e.detail());
      }
    };
    if (key == "margin") {
      config.margin = number();
    } else if (key == "contiguity") {
      config.require_contiguity = wrapped([&] { return parse_bool(value); });
    } else if (key == "percentile") {
      config.threshold_percentile = number();
    } else if (key == "wall_exclusion") {
      config.wall_exclusion = number();
    } else if (key == "max_conc") {
      if (value.empty() || value == "none") {
        config.device_max_conc.reset();
      } else {
        config.device_max_conc = wrapped([&] { return MolarConcentration::parse(value); });
      }
    } else if (key == "saturation_threshold") {
      config.saturation_threshold = number();
    } else if (key == "out") {
      config.output_dir = std::string(value);
    } else {
      throw fail("unknown key '" + std::string(key) + "'");
    }
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(buffer.str(), config);
}

PlateLayout resolve_layout(std::string_view name_or_path) {
  if (name_or_path == "fluorescein") return fluorescein_layout();
  if (name_or_path == "gfp-m") return gfp_layout("m");
  if (name_or_path == "gfp-n") return gfp_layout("n");
  auto in = open_input(std::filesystem::path(std::string(name_or_path)));
  return parse_layout(in);
}

AnalyzeOutput run_analyze(const std::vector<std::filesystem::path>& images, const PlateLayout& layout,
                          const RunConfig& config) {
  validate(config);
  const auto& wells = layout.wells();
  if (images.size() != wells.size()) {
    std::string detail = images.size() < wells.size()
                             ? "no image for well " + std::to_string(wells[images.size()].index)
                             : "more images than wells";
    throw Error(ErrorCode::ArityMismatch, std::to_string(images.size()) + " images for a " +
                                              std::to_string(wells.size()) + "-well layout: " + detail);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!std::filesystem::is_regular_file(images[i])) {
      throw Error(ErrorCode::Io, "well " + std::to_string(wells[i].index) + ": no such file " + images[i].string());
    }
  }

  const SegmentationParams params = config.segmentation();
  std::vector<RgbProfile> profiles(images.size());
  std::vector<std::exception_ptr> failures(images.size());
  const auto n = static_cast<std::int64_t>(images.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      profiles[i] = analyze_well_image(read_file(images[i]), params);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "well " + std::to_string(wells[i].index) + " (" + images[i].string() + "): " + e.detail());
    }
  }

  AnalyzeOutput out;
  std::vector<double> readings;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    out.profiles.push_back({wells[i].index, profiles[i]});
    readings.push_back(profiles[i].mean.g);
  }
  out.series = make_series("device", layout, readings);

  ensure_dir(config.output_dir);
  std::ostringstream profile_csv;
  write_profile_csv(profile_csv, out.profiles);
  write_text(config.output_dir / "profiles.csv", profile_csv.str());
  write_text(config.output_dir / "series.csv", series_csv(out.series));
  return out;
}

LodOutput run_lod(const MeasurementSeries& input, const RunConfig& config, const std::map<int, double>& saturation) {
  validate(config);
  LodOutput out;
  out.series = exclude_saturated(input, config.device_max_conc, config.saturation_threshold, saturation);
  bool has_blank = false;
  bool has_control = false;
  for (const Record& r : out.series.records) {
    has_blank |= r.role.kind == RoleKind::Blank;
    has_control |= r.role.kind == RoleKind::Control;
  }
  out.against_control = has_control && !has_blank;
  const DetectionCriterion criterion = config.criterion();
  out.result = out.against_control ? detect_vs_control(out.series, criterion) : detection_limit(out.series, criterion);
  out.summary = lod_summary(out.result);

  ensure_dir(config.output_dir);
  std::ostringstream csv;
  write_detection_csv(csv, out.result);
  write_text(config.output_dir / "detection.csv", csv.str());
  write_text(config.output_dir / "lod.svg", render_svg(detection_plot(out.series, out.result, criterion)));
  return out;
}

LodOutput run_lod(const std::filesystem::path& series_csv_path, const RunConfig& config,
                  const std::optional<std::filesystem::path>& profiles_csv) {
  auto in = open_input(series_csv_path);
  MeasurementSeries series = parse_series_csv(in, series_csv_path.stem().string());
  std::map<int, double> saturation;
  if (profiles_csv) {
    auto pin = open_input(*profiles_csv);
    saturation = saturation_by_well(parse_profile_csv(pin));
  }
  return run_lod(series, config, saturation);
}

CompareOutput run_compare(const std::filesystem::path& device_csv, const std::filesystem::path& reference_csv,
                          const RunConfig& config) {
  validate(config);
  auto din = open_input(device_csv);
  auto rin = open_input(reference_csv);
  auto device = exclude_saturated(parse_series_csv(din, "device"), config.device_max_conc, 1.0);
  auto reference = exclude_saturated(parse_series_csv(rin, "reference"), config.device_max_conc, 1.0);
  CompareOutput out{compare_with_reference(device, reference), {}};
  out.summary = rho_summary(out.report);
  ensure_dir(config.output_dir);
  std::ostringstream csv;
  write_comparison_csv(csv, out.report);
  write_text(config.output_dir / "comparison.csv", csv.str());
  return out;
}

std::string run_fixtures(std::string_view name) { return series_csv(fixture(name)); }

void run_render(const RenderSpec& spec, const std::filesystem::path& png_path) {
  RasterImage image = render_well_image(spec);
  write_file(png_path, encode_png(image));
}

}  // namespace wellfluor
