#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace outfit {

inline constexpr std::size_t kHueBins = 24;
inline constexpr std::size_t kSaturationBins = 8;
inline constexpr std::size_t kValueBins = 8;
inline constexpr std::size_t kHistogramSize = kHueBins + kSaturationBins + kValueBins;
inline constexpr std::size_t kSaturationOffset = kHueBins;
inline constexpr std::size_t kValueOffset = kHueBins + kSaturationBins;

struct Pixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// h in degrees [0, 360), s and v in [0, 1].
struct HsvTriple {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

/// Row-major 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Pixel> pixels;

  Image() = default;
  Image(int w, int h, Pixel fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  Pixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Pixel& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// 40-bin HSV color feature: hue[0..24) | saturation[24..32) | value[32..40),
/// each block L1-normalized on its own.
struct ColorHistogram {
  std::array<double, kHistogramSize> bins{};

  std::span<const double, kHueBins> hue() const { return std::span(bins).first<kHueBins>(); }
  std::span<const double, kSaturationBins> saturation() const {
    return std::span(bins).subspan<kSaturationOffset, kSaturationBins>();
  }
  std::span<const double, kValueBins> value() const {
    return std::span(bins).subspan<kValueOffset, kValueBins>();
  }

  friend bool operator==(const ColorHistogram&, const ColorHistogram&) = default;
};

/// Standard hexcone conversion. Achromatic pixels (s = 0) get h = 0.
HsvTriple rgb_to_hsv(Pixel p);

/// Inverse conversion, rounded to the nearest 8-bit channel value.
Pixel hsv_to_rgb(HsvTriple hsv);

std::size_t hue_bin(double h);
std::size_t saturation_bin(double s);
std::size_t value_bin(double v);

/// One count per pixel into each block, then per-block L1 normalization.
/// Throws EmptyImage when there are no pixels.
ColorHistogram extract_histogram(const Image& image);

/// Same, restricted to pixels whose mask byte is non-zero. The mask has one
/// byte per pixel in row-major order. Throws EmptyImage when nothing is
/// unmasked and InvalidArgument on a size mismatch.
ColorHistogram extract_histogram(const Image& image, std::span<const std::uint8_t> mask);

/// 40 little-endian IEEE-754 doubles (320 bytes).
std::array<std::uint8_t, kHistogramSize * 8> to_bytes(const ColorHistogram& h);
ColorHistogram histogram_from_bytes(std::span<const std::uint8_t> bytes);

/// 40 comma-separated decimals printed with enough digits to round-trip.
std::string to_text(const ColorHistogram& h);
ColorHistogram histogram_from_text(std::string_view text);

// Image files (PNG or JPEG, detected from content).
Image load_image(const std::string& path);
void write_png(const std::string& path, const Image& image);

}  // namespace outfit
