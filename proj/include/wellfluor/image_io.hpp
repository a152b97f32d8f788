#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wellfluor/image.hpp"

namespace wellfluor {

inline constexpr int kMinImageSide = 32;

// Decodes an 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or a JPEG
// (gray or RGB). Alpha is dropped and gray is replicated into all channels.
// Errors: DecodeError, UnsupportedFormat, TooSmall.
RasterImage load_image(std::span<const std::uint8_t> bytes);

// 8-bit RGB PNG. Output bytes are a pure function of the pixels.
std::vector<std::uint8_t> encode_png(const RasterImage& image);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace wellfluor
