#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace wellfluor {

// Molar concentration (mol/L) held exactly as (num/den) * 10^exponent with the
// mantissa num/den reduced and normalized to [1, 10). Decade values such as
// 100 mM (1e-1) or 100 pM (1e-10) have mantissa 1/1, so their log10 is an exact
// integer and fold-10 dilution never accumulates rounding error.
class MolarConcentration {
 public:
  MolarConcentration() = default;  // 1 mol/L

  static MolarConcentration decade(std::int64_t log10_molar);
  static MolarConcentration from_parts(std::int64_t num, std::int64_t den, std::int64_t exponent);
  // Accepts plain and scientific decimal notation ("1e-7", "3.3E-5", "0.001").
  static MolarConcentration parse(std::string_view text);

  MolarConcentration divided_by(std::int64_t fold) const;

  std::int64_t mantissa_num() const noexcept { return num_; }
  std::int64_t mantissa_den() const noexcept { return den_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  // Integer log10 when the value is an exact power of ten.
  std::optional<std::int64_t> exact_log10() const noexcept;
  double log10_molar() const noexcept;
  double molar() const noexcept;

  // Shortest scientific form ("1e-10", "3.3e-5"). Mantissas that are not
  // finite decimals fall back to 17 significant digits.
  std::string to_string() const;

  friend bool operator==(const MolarConcentration&, const MolarConcentration&) = default;
  friend std::strong_ordering operator<=>(const MolarConcentration& a, const MolarConcentration& b);

 private:
  MolarConcentration(std::int64_t num, std::int64_t den, std::int64_t exponent)
      : num_(num), den_(den), exponent_(exponent) {}
  static MolarConcentration normalized(__int128 num, __int128 den, std::int64_t exponent);

  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
  std::int64_t exponent_ = 0;
};

// An unquantified stock symbol divided by an integer dilution factor, e.g. m/1000.
struct RelativeFactor {
  std::string symbol;
  std::int64_t divisor = 1;

  static RelativeFactor parse(std::string_view text);
  RelativeFactor divided_by(std::int64_t fold) const;
  std::string to_string() const;

  friend bool operator==(const RelativeFactor&, const RelativeFactor&) = default;
};

using Concentration = std::variant<MolarConcentration, RelativeFactor>;

// Unordered when the two values are of different kinds or carry different symbols.
std::partial_ordering compare(const Concentration& a, const Concentration& b);

std::string to_string(const Concentration& c);
Concentration parse_concentration(std::string_view text);

// log10 position on a plot axis; relative factors map to -log10(divisor).
double axis_log10(const Concentration& c);

}  // namespace wellfluor
