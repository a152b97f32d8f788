#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "wellfluor/commands.hpp"
#include "wellfluor/image_io.hpp"
#include "wellfluor/report.hpp"

using namespace wellfluor;
using wellfluor::testing::code_of;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("wellfluor-test-" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("fixture CSV rows") {
  std::string dev = series_csv(device_fluorescein_fixture());
  CHECK(dev.rfind("well_index,role,concentration_molar,reading\n", 0) == 0);
  CHECK(dev.find("\n# well 7: 100 is a lower bound") != std::string::npos);
  CHECK(dev.find("\n7,sample,1e-7,100\n") != std::string::npos);
  CHECK(dev.find("\n11,sample,1e-11,87.31\n") != std::string::npos);
  CHECK(dev.find("\n12,blank,,93.85\n") != std::string::npos);
  std::string ref = run_fixtures("victor-fluorescein");
  CHECK(ref.find("\n11,sample,1e-11,1028\n") != std::string::npos);
  CHECK(code_of([] { run_fixtures("nope"); }) == ErrorCode::UnknownFixture);
}

TEST_CASE("series CSV round trip") {
  for (auto name : fixture_names()) {
    auto s = fixture(name);
    auto back = parse_series_csv(series_csv(s), s.instrument);
    CHECK(back == s);
  }
  auto gfp = make_series("dev", gfp_layout("n"), {5, 4, 3.25, 2, 1, 0.5, 0.125});
  CHECK(parse_series_csv(series_csv(gfp), "dev") == gfp);
}

TEST_CASE("series CSV errors name the line") {
  auto err = [](const std::string& text) {
    try {
      parse_series_csv(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      return std::string(e.what());
    }
    FAIL("no error");
    return std::string();
  };
  std::string h = "well_index,role,concentration_molar,reading\n";
  CHECK(err("") .find("empty") != std::string::npos);
  CHECK(err("a,b\n").find("line 1") != std::string::npos);
  CHECK(err(h + "1,sample,1e-3\n").find("line 2") != std::string::npos);
  CHECK(err(h + "1,sample,1e-3,5\n2,dish,,4\n").find("line 3") != std::string::npos);
  CHECK(err(h + "1,sample,,5\n").find("line 2") != std::string::npos);
  CHECK(err(h + "1,blank,1e-3,5\n").find("line 2") != std::string::npos);
  CHECK(err(h + "1,sample,1e-3,x\n").find("line 2") != std::string::npos);
  CHECK(!err(h + "1,sample,1e-3,5\n2,sample,1e-2,5\n").empty());
}

TEST_CASE("detection and comparison CSV round trip") {
  auto det = detection_limit(device_fluorescein_fixture());
  std::stringstream ss;
  write_detection_csv(ss, det);
  std::string text = ss.str();
  CHECK(text.find("\n8,98.45,0.049014,false\n") != std::string::npos);
  CHECK(text.find("\n7,100,0.065530,true\n") != std::string::npos);
  auto rows = parse_detection_csv(ss);
  REQUIRE(rows.size() == det.per_well.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].well_index == det.per_well[i].well_index);
    CHECK(rows[i].reading == det.per_well[i].reading);
    CHECK(rows[i].detected == det.per_well[i].detected);
    CHECK(rows[i].relative_excess == doctest::Approx(det.per_well[i].relative_excess).epsilon(1e-6));
  }

  auto rep = compare_with_reference(device_fluorescein_fixture(), victor_fluorescein_fixture());
  std::stringstream cs;
  write_comparison_csv(cs, rep);
  auto back = parse_comparison_csv(cs);
  REQUIRE(back.size() == 4);
  CHECK(back[0].well_index == 9);
  CHECK(back[0].device_rank == 4);
  CHECK(back[3].reference_rank == 2);
}

TEST_CASE("profile CSV round trip") {
  RgbProfile p;
  p.mean = {1.5, 200.25, 3};
  p.median = {1, 200, 3};
  p.stddev = {0.5, 1.75, 0};
  p.pixel_count = 3217;
  p.saturation_fraction = 0.0125;
  std::stringstream ss;
  write_profile_csv(ss, {{4, p}});
  CHECK(ss.str() == std::string(kProfileCsvHeader) + "\n4,1.50,200.25,3.00,200.00,1.75,3217,0.012500\n");
  auto rows = parse_profile_csv(ss);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].profile.mean.g == 200.25);
  CHECK(saturation_by_well(rows) == std::map<int, double>{{4, 0.0125}});
}

TEST_CASE("config text") {
  RunConfig c;
  apply_config_text("# comment\nmargin = 0.1\ncontiguity = false\npercentile=0.8\n"
                    "wall_exclusion = 0.7\nmax_conc = 1e-3\nsaturation_threshold = 0.05\nout = results\n",
                    c);
  CHECK(c.margin == 0.1);
  CHECK_FALSE(c.require_contiguity);
  CHECK(c.threshold_percentile == 0.8);
  CHECK(c.wall_exclusion == 0.7);
  CHECK(c.device_max_conc == MolarConcentration::decade(-3));
  CHECK(c.saturation_threshold == 0.05);
  CHECK(c.output_dir == fs::path("results"));
  RunConfig d;
  CHECK(code_of([&] { apply_config_text("colour = red\n", d); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { apply_config_text("margin 0.1\n", d); }) == ErrorCode::ParseError);
  d.margin = 1.5;
  CHECK(code_of([&] { validate(d); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("resolve_layout") {
  CHECK(resolve_layout("fluorescein").size() == 12);
  CHECK(resolve_layout("gfp-m").size() == 7);
  TempDir dir;
  spit(dir.path / "l.txt", "fold,10\nwell,1,sample,1e-3\nwell,2,blank\n");
  CHECK(resolve_layout((dir.path / "l.txt").string()).size() == 2);
  CHECK(code_of([&] { resolve_layout((dir.path / "missing.txt").string()); }) == ErrorCode::Io);
}

TEST_CASE("run_lod and run_compare write their reports") {
  TempDir dir;
  RunConfig config;
  config.output_dir = dir.path;
  spit(dir.path / "dev.csv", series_csv(device_fluorescein_fixture()));
  spit(dir.path / "ref.csv", series_csv(victor_fluorescein_fixture()));

  auto lod = run_lod(dir.path / "dev.csv", config);
  CHECK(lod.summary == "lod=1e-7");
  CHECK(fs::exists(dir.path / "detection.csv"));
  CHECK(slurp(dir.path / "lod.svg").find("<svg") != std::string::npos);

  auto ref = run_lod(dir.path / "ref.csv", config);
  CHECK(ref.summary == "lod=1e-10");

  auto cmp = run_compare(dir.path / "dev.csv", dir.path / "ref.csv", config);
  CHECK(cmp.summary == "rho=0.800 n=4");
  CHECK(slurp(dir.path / "comparison.csv").rfind(std::string(kComparisonCsvHeader), 0) == 0);

  config.device_max_conc = MolarConcentration::decade(-8);
  auto capped = run_lod(dir.path / "dev.csv", config);
  CHECK(capped.series.is_excluded(7));
  CHECK(capped.summary == "lod=none");
}

TEST_CASE("run_lod falls back to the control baseline") {
  TempDir dir;
  RunConfig config;
  config.output_dir = dir.path;
  auto gfp = make_series("dev", gfp_layout("m"), {50, 40, 30, 20, 10, 25, 5});
  gfp.records.pop_back();  // no blank
  auto out = run_lod(gfp, config);
  CHECK(out.against_control);
  CHECK(out.summary == "lod=m/100");
}

TEST_CASE("run_analyze over rendered wells") {
  TempDir dir;
  RunConfig config;
  config.output_dir = dir.path / "out";
  std::vector<fs::path> images;
  for (int i = 0; i < 12; ++i) {
    RenderSpec spec;
    spec.interior = {0, static_cast<std::uint8_t>(200 - 10 * i), 0};
    spec.noise_stddev = 2;
    spec.seed = static_cast<std::uint64_t>(i);
    images.push_back(dir.path / ("w" + std::to_string(i + 1) + ".png"));
    run_render(spec, images.back());
  }
  auto out = run_analyze(images, fluorescein_layout(), config);
  REQUIRE(out.series.records.size() == 12);
  for (int i = 0; i < 12; ++i) {
    CHECK(std::abs(out.series.records[i].reading - (200 - 10 * i)) <= 1.0);
  }
  CHECK(fs::exists(config.output_dir / "profiles.csv"));
  auto back = parse_series_csv(slurp(config.output_dir / "series.csv"));
  CHECK(back.records.size() == 12);

  SUBCASE("one image short") {
    auto short_list = images;
    short_list.pop_back();
    try {
      run_analyze(short_list, fluorescein_layout(), config);
      FAIL("expected arity error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ArityMismatch);
      CHECK(std::string(e.what()).find("well 12") != std::string::npos);
    }
  }
  SUBCASE("bad image names its well") {
    spit(images[2], "not an image");
    try {
      run_analyze(images, fluorescein_layout(), config);
      FAIL("expected decode error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DecodeError);
      CHECK(std::string(e.what()).find("well 3") != std::string::npos);
    }
  }
}

TEST_CASE("detection plot SVG matches golden file") {
  auto s = device_fluorescein_fixture();
  DetectionCriterion c;
  auto svg = render_svg(detection_plot(s, detection_limit(s, c), c));
  fs::path golden = fs::path(WELLFLUOR_GOLDEN_DIR) / "device_lod.svg";
  if (std::getenv("WELLFLUOR_UPDATE_GOLDEN")) spit(golden, svg);
  CHECK(svg == slurp(golden));
  CHECK(svg.find("lod") != std::string::npos);
}
