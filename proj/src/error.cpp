#include "wellfluor/error.hpp"

namespace wellfluor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::NoWellFound: return "NoWellFound";
    case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
    case ErrorCode::TooFewPixels: return "TooFewPixels";
    case ErrorCode::OutOfGamutRange: return "OutOfGamutRange";
    case ErrorCode::SpecOutOfBounds: return "SpecOutOfBounds";
    case ErrorCode::NoBlank: return "NoBlank";
    case ErrorCode::AllExcluded: return "AllExcluded";
    case ErrorCode::NonPositiveBlank: return "NonPositiveBlank";
    case ErrorCode::NoControl: return "NoControl";
    case ErrorCode::NonPositiveControl: return "NonPositiveControl";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewCommonWells: return "TooFewCommonWells";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
  }
  return "Error";
}

}  // namespace wellfluor
