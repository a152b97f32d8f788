#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wellfluor {

enum class ErrorCode {
  InvalidArgument,
  Overflow,
  ParseError,
  // imaging
  DecodeError,
  UnsupportedFormat,
  TooSmall,
  NoWellFound,
  RoiOutOfBounds,
  TooFewPixels,
  // photometry
  OutOfGamutRange,
  SpecOutOfBounds,
  // quant
  NoBlank,
  AllExcluded,
  NonPositiveBlank,
  NoControl,
  NonPositiveControl,
  ShapeMismatch,
  TooFewCommonWells,
  // cli
  ArityMismatch,
  Io,
  UnknownFixture,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so callers
// (and tests) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace wellfluor
