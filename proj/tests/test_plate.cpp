#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "wellfluor/concentration.hpp"
#include "wellfluor/error.hpp"
#include "wellfluor/plate.hpp"

using namespace wellfluor;

using wellfluor::testing::code_of;

TEST_CASE("concentration parse and format") {
  CHECK(MolarConcentration::parse("1e-7") == MolarConcentration::decade(-7));
  CHECK(MolarConcentration::parse("0.0001") == MolarConcentration::decade(-4));
  CHECK(MolarConcentration::parse("100e-3") == MolarConcentration::decade(-1));
  CHECK(MolarConcentration::parse("3.3E-5").to_string() == "3.3e-5");
  CHECK(MolarConcentration::parse("25").to_string() == "2.5e1");
  CHECK(MolarConcentration::decade(-11).to_string() == "1e-11");
  CHECK(MolarConcentration::decade(-1).exact_log10() == -1);
  CHECK_FALSE(MolarConcentration::parse("2e-3").exact_log10().has_value());

  CHECK(code_of([] { MolarConcentration::parse("abc"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { MolarConcentration::parse("-1e-3"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { MolarConcentration::parse("0"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MolarConcentration::parse("1e-"); }) == ErrorCode::ParseError);
}

TEST_CASE("concentration ordering follows log10 value") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> mant(1, 999);
  std::uniform_int_distribution<int> expo(-12, 0);
  for (int i = 0; i < 500; ++i) {
    auto a = MolarConcentration::from_parts(mant(rng), 7, expo(rng));
    auto b = MolarConcentration::from_parts(mant(rng), 3, expo(rng));
    if (std::abs(a.log10_molar() - b.log10_molar()) < 1e-12) continue;
    CHECK(((a < b) == (a.log10_molar() < b.log10_molar())));
  }
  // Equal values have one canonical form.
  CHECK(MolarConcentration::from_parts(50, 10, -3) == MolarConcentration::from_parts(5, 1, -3));
  CHECK(MolarConcentration::from_parts(1, 2, 0) == MolarConcentration::parse("0.5"));
}

TEST_CASE("relative factors") {
  auto m = RelativeFactor::parse("m");
  CHECK(m.to_string() == "m");
  CHECK(m.divided_by(10).divided_by(10).to_string() == "m/100");
  CHECK(RelativeFactor::parse("n/1000") == RelativeFactor{"n", 1000});
  CHECK(compare(Concentration{RelativeFactor{"m", 10}}, Concentration{RelativeFactor{"m", 100}}) > 0);
  CHECK(compare(Concentration{RelativeFactor{"m", 10}}, Concentration{RelativeFactor{"n", 100}}) ==
        std::partial_ordering::unordered);
  CHECK(compare(Concentration{RelativeFactor{"m", 10}}, Concentration{MolarConcentration::decade(-3)}) ==
        std::partial_ordering::unordered);
  CHECK(code_of([] { RelativeFactor::parse("m/0"); }) == ErrorCode::ParseError);
}

TEST_CASE("make_dilution_series") {
  SUBCASE("fluorescein stock") {
    auto s = make_dilution_series(MolarConcentration::decade(-1), 10, 11);
    REQUIRE(s.size() == 11);
    const char* expected[] = {"1e-1", "1e-2", "1e-3", "1e-4", "1e-5", "1e-6",
                              "1e-7", "1e-8", "1e-9", "1e-10", "1e-11"};
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].to_string() == expected[i]);
  }
  SUBCASE("single element") {
    auto c0 = MolarConcentration::parse("2.5e-4");
    auto s = make_dilution_series(c0, 10, 1);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == c0);
  }
  SUBCASE("relative stock") {
    auto s = make_dilution_series(RelativeFactor::parse("m"), 10, 5);
    std::vector<std::string> got;
    for (const auto& c : s) got.push_back(c.to_string());
    CHECK(got == std::vector<std::string>{"m", "m/10", "m/100", "m/1000", "m/10000"});
  }
  SUBCASE("malformed protocol") {
    CHECK(code_of([] { make_dilution_series(MolarConcentration::decade(-1), 10, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { make_dilution_series(MolarConcentration::decade(-1), 1, 3); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("dilution spacing and monotonicity hold for random protocols") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> fold_dist(2, 20);
  std::uniform_int_distribution<int> count_dist(1, 12);
  std::uniform_int_distribution<int> mant(1, 99);
  for (int trial = 0; trial < 200; ++trial) {
    int fold = fold_dist(rng);
    int count = count_dist(rng);
    auto stock = MolarConcentration::from_parts(mant(rng), 1, -fold_dist(rng) / 4);
    auto s = make_dilution_series(stock, fold, count);
    REQUIRE(s.size() == static_cast<std::size_t>(count));
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      CHECK(s[i + 1] < s[i]);
      CHECK(std::abs((s[i].log10_molar() - s[i + 1].log10_molar()) - std::log10(fold)) < 1e-12);
    }
  }
  // Power-of-ten folds are exact in the decade exponent.
  for (int fold : {10, 100, 1000}) {
    auto s = make_dilution_series(MolarConcentration::decade(-1), fold, 4);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      CHECK(*s[i].exact_log10() - *s[i + 1].exact_log10() == static_cast<int>(std::lround(std::log10(fold))));
    }
  }
}

TEST_CASE("fluorescein layout") {
  auto layout = fluorescein_layout();
  CHECK(layout.size() == 12);
  CHECK(layout.fold() == 10);
  CHECK(layout.well(7).role == WellRole::sample(MolarConcentration::parse("100e-9")));
  CHECK(layout.well(12).role == WellRole::blank());
  // 100mM, 10mM, 1mM, 100uM, 10uM, 1uM, 100nM, 10nM, 1nM, 100pM, 10pM.
  for (int i = 1; i <= 11; ++i) {
    const auto& c = std::get<MolarConcentration>(*layout.well(i).role.concentration);
    CHECK(c.exact_log10() == -i);
  }
}

TEST_CASE("gfp layouts") {
  auto m = gfp_layout("m");
  CHECK(m.size() == 7);
  CHECK(m.well(4).role == WellRole::sample(RelativeFactor{"m", 1000}));
  CHECK(m.well(7).role == WellRole::blank());
  auto n = gfp_layout("n");
  CHECK(n.well(6).role == WellRole::control());
  CHECK(n.well(1).role == WellRole::sample(RelativeFactor{"n", 1}));
}

TEST_CASE("layout validation") {
  CHECK(code_of([] { PlateLayout(10, {{2, WellRole::blank()}, {1, WellRole::control()}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { PlateLayout(10, {{97, WellRole::blank()}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          PlateLayout(10, {{1, WellRole::sample(MolarConcentration::decade(-5))},
                           {2, WellRole::sample(MolarConcentration::decade(-4))}});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { PlateLayout(10, {{1, WellRole::blank()}, {2, WellRole::blank()}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { PlateLayout(10, {{1, WellRole{RoleKind::Sample, std::nullopt}}}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("layout file round trip") {
  for (const auto& layout : {fluorescein_layout(), gfp_layout("m")}) {
    std::ostringstream out;
    write_layout(out, layout);
    CHECK(parse_layout(out.str()) == layout);
  }
  auto parsed = parse_layout("# custom row\nfold,10\nwell,1,sample,1e-6\nwell,2,sample,1e-7\nwell,3,blank\n");
  CHECK(parsed.size() == 3);
  CHECK(parsed.well(2).role == WellRole::sample(MolarConcentration::decade(-7)));

  CHECK(code_of([] { parse_layout("well,1,blank\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_layout("fold,10\nwell,1,sample\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_layout("fold,10\nwell,1,blank,1e-3\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_layout("fold,10\nwell,x,blank\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_layout("fold,10\nplate,1\n"); }) == ErrorCode::ParseError);
}
