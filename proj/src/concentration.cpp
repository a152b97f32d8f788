#include "wellfluor/concentration.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "wellfluor/error.hpp"

namespace wellfluor {

namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void reduce(i128& num, i128& den) {
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

}  // namespace

MolarConcentration MolarConcentration::normalized(i128 num, i128 den, std::int64_t exponent) {
  if (num <= 0 || den <= 0) {
    throw Error(ErrorCode::InvalidArgument, "concentration must be positive");
  }
  reduce(num, den);
  // Pull whole powers of ten out of the mantissa first; keeps num/den small.
  while (num % 10 == 0) {
    num /= 10;
    ++exponent;
  }
  while (den % 10 == 0) {
    den /= 10;
    --exponent;
  }
  while (num >= 10 * den) {
    den *= 10;
    ++exponent;
    reduce(num, den);
  }
  while (num < den) {
    num *= 10;
    --exponent;
    reduce(num, den);
  }
  if (num > kMax || den > kMax) {
    throw Error(ErrorCode::Overflow, "concentration mantissa not representable");
  }
  return MolarConcentration(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), exponent);
}

MolarConcentration MolarConcentration::decade(std::int64_t log10_molar) {
  return MolarConcentration(1, 1, log10_molar);
}

MolarConcentration MolarConcentration::from_parts(std::int64_t num, std::int64_t den, std::int64_t exponent) {
  return normalized(num, den, exponent);
}

MolarConcentration MolarConcentration::parse(std::string_view text) {
  auto fail = [&] { return Error(ErrorCode::ParseError, "invalid concentration '" + std::string(text) + "'"); };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw fail();
  if (text.front() == '+') text.remove_prefix(1);

  i128 digits = 0;
  std::int64_t exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '.') {
      if (seen_point) throw fail();
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(ch))) break;
    any_digit = true;
    if (digits > kMax / 10) {
      // Further digits are below int64 precision; drop them but keep the scale.
      if (!seen_point) ++exponent;
      continue;
    }
    digits = digits * 10 + (ch - '0');
    if (seen_point) --exponent;
  }
  if (!any_digit) throw fail();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    std::string_view rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    std::int64_t e = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) throw fail();
    exponent += e;
  }
  if (digits == 0) throw Error(ErrorCode::InvalidArgument, "concentration must be positive: " + std::string(text));
  return normalized(digits, 1, exponent);
}

MolarConcentration MolarConcentration::divided_by(std::int64_t fold) const {
  if (fold <= 0) throw Error(ErrorCode::InvalidArgument, "dilution fold must be positive");
  return normalized(i128(num_), i128(den_) * fold, exponent_);
}

std::optional<std::int64_t> MolarConcentration::exact_log10() const noexcept {
  if (num_ == 1 && den_ == 1) return exponent_;
  return std::nullopt;
}

double MolarConcentration::log10_molar() const noexcept {
  if (num_ == 1 && den_ == 1) return static_cast<double>(exponent_);
  return static_cast<double>(exponent_) + std::log10(static_cast<double>(num_) / static_cast<double>(den_));
}

double MolarConcentration::molar() const noexcept {
  return static_cast<double>(num_) / static_cast<double>(den_) * std::pow(10.0, static_cast<double>(exponent_));
}

std::string MolarConcentration::to_string() const {
  // A reduced fraction is a finite decimal iff den has no prime factors besides 2 and 5.
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d == 1) {
    int k = std::max(twos, fives);
    i128 scaled = num_;
    for (int j = 0; j < k - twos; ++j) scaled *= 2;
    for (int j = 0; j < k - fives; ++j) scaled *= 5;
    if (scaled <= kMax) {
      std::string digits = std::to_string(static_cast<std::int64_t>(scaled));
      while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
      std::string out(1, digits[0]);
      if (digits.size() > 1) {
        out += '.';
        out.append(digits, 1);
      }
      return out + "e" + std::to_string(exponent_);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", molar());
  return buf;
}

std::strong_ordering operator<=>(const MolarConcentration& a, const MolarConcentration& b) {
  // Mantissas share the interval [1, 10), so the exponent decides first.
  if (auto c = a.exponent_ <=> b.exponent_; c != 0) return c;
  return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
}

RelativeFactor RelativeFactor::parse(std::string_view text) {
  auto slash = text.find('/');
  RelativeFactor out;
  out.symbol = std::string(text.substr(0, slash));
  if (out.symbol.empty() || !std::isalpha(static_cast<unsigned char>(out.symbol.front()))) {
    throw Error(ErrorCode::ParseError, "invalid relative concentration '" + std::string(text) + "'");
  }
  if (slash != std::string_view::npos) {
    std::string_view rest = text.substr(slash + 1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), out.divisor);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || out.divisor <= 0) {
      throw Error(ErrorCode::ParseError, "invalid divisor in '" + std::string(text) + "'");
    }
  }
  return out;
}

RelativeFactor RelativeFactor::divided_by(std::int64_t fold) const {
  if (fold <= 0) throw Error(ErrorCode::InvalidArgument, "dilution fold must be positive");
  if (divisor > std::numeric_limits<std::int64_t>::max() / fold) {
    throw Error(ErrorCode::Overflow, "relative divisor overflow");
  }
  return RelativeFactor{symbol, divisor * fold};
}

std::string RelativeFactor::to_string() const {
  if (divisor == 1) return symbol;
  return symbol + "/" + std::to_string(divisor);
}

std::partial_ordering compare(const Concentration& a, const Concentration& b) {
  if (a.index() != b.index()) return std::partial_ordering::unordered;
  if (const auto* ma = std::get_if<MolarConcentration>(&a)) {
    return *ma <=> std::get<MolarConcentration>(b);
  }
  const auto& ra = std::get<RelativeFactor>(a);
  const auto& rb = std::get<RelativeFactor>(b);
  if (ra.symbol != rb.symbol) return std::partial_ordering::unordered;
  return rb.divisor <=> ra.divisor;
}

std::string to_string(const Concentration& c) {
  return std::visit([](const auto& v) { return v.to_string(); }, c);
}

Concentration parse_concentration(std::string_view text) {
  std::size_t start = 0;
  while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
  if (start < text.size()) {
    char ch = text[start];
    bool numeric = std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '+';
    if (!numeric) return RelativeFactor::parse(text.substr(start));
  }
  return MolarConcentration::parse(text);
}

double axis_log10(const Concentration& c) {
  if (const auto* m = std::get_if<MolarConcentration>(&c)) return m->log10_molar();
  return -std::log10(static_cast<double>(std::get<RelativeFactor>(c).divisor));
}

}  // namespace wellfluor
