#include <array>
#include <bit>
#include <charconv>
#include <cstring>

#include "outfit/error.hpp"
#include "outfit/feature.hpp"

namespace outfit {
namespace {

struct BinCounts {
  std::array<std::uint64_t, kHueBins> hue{};
  std::array<std::uint64_t, kSaturationBins> saturation{};
  std::array<std::uint64_t, kValueBins> value{};
  std::uint64_t total = 0;

  void add(Pixel p) {
    const HsvTriple hsv = rgb_to_hsv(p);
    ++hue[hue_bin(hsv.h)];
    ++saturation[saturation_bin(hsv.s)];
    ++value[value_bin(hsv.v)];
    ++total;
  }
};

ColorHistogram normalize(const BinCounts& counts) {
  if (counts.total == 0) throw Error(ErrorCode::EmptyImage, "image has no unmasked pixels");
  const auto n = static_cast<double>(counts.total);
  ColorHistogram h;
  for (std::size_t i = 0; i < kHueBins; ++i) h.bins[i] = static_cast<double>(counts.hue[i]) / n;
  for (std::size_t i = 0; i < kSaturationBins; ++i)
    h.bins[kSaturationOffset + i] = static_cast<double>(counts.saturation[i]) / n;
  for (std::size_t i = 0; i < kValueBins; ++i)
    h.bins[kValueOffset + i] = static_cast<double>(counts.value[i]) / n;
  return h;
}

}  // namespace

ColorHistogram extract_histogram(const Image& image) {
  BinCounts counts;
  for (const Pixel& p : image.pixels) counts.add(p);
  return normalize(counts);
}

ColorHistogram extract_histogram(const Image& image, std::span<const std::uint8_t> mask) {
  if (mask.size() != image.pixels.size())
    throw Error(ErrorCode::InvalidArgument, "mask size " + std::to_string(mask.size()) +
                                                " does not match pixel count " +
                                                std::to_string(image.pixels.size()));
  BinCounts counts;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] != 0) counts.add(image.pixels[i]);
  return normalize(counts);
}

std::array<std::uint8_t, kHistogramSize * 8> to_bytes(const ColorHistogram& h) {
  std::array<std::uint8_t, kHistogramSize * 8> out{};
  for (std::size_t i = 0; i < kHistogramSize; ++i) {
    const auto word = std::bit_cast<std::uint64_t>(h.bins[i]);
    for (std::size_t b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<std::uint8_t>(word >> (8 * b));
  }
  return out;
}

ColorHistogram histogram_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kHistogramSize * 8)
    throw Error(ErrorCode::ParseError, "histogram blob must be 320 bytes, got " +
                                           std::to_string(bytes.size()));
  ColorHistogram h;
  for (std::size_t i = 0; i < kHistogramSize; ++i) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 8; ++b) word |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    h.bins[i] = std::bit_cast<double>(word);
  }
  return h;
}

std::string to_text(const ColorHistogram& h) {
  std::string out;
  out.reserve(kHistogramSize * 12);
  char buf[32];
  for (std::size_t i = 0; i < kHistogramSize; ++i) {
    if (i) out.push_back(',');
    const auto res = std::to_chars(buf, buf + sizeof buf, h.bins[i]);
    out.append(buf, res.ptr);
  }
  return out;
}

ColorHistogram histogram_from_text(std::string_view text) {
  ColorHistogram h;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (std::size_t i = 0; i < kHistogramSize; ++i) {
    while (p < end && *p == ' ') ++p;
    const auto res = std::from_chars(p, end, h.bins[i]);
    if (res.ec != std::errc{})
      throw Error(ErrorCode::ParseError, "bad histogram value at position " + std::to_string(i));
    p = res.ptr;
    while (p < end && *p == ' ') ++p;
    if (i + 1 < kHistogramSize) {
      if (p == end || *p != ',')
        throw Error(ErrorCode::ParseError, "histogram text must hold 40 comma-separated values");
      ++p;
    }
  }
  if (p != end) throw Error(ErrorCode::ParseError, "trailing data after 40 histogram values");
  return h;
}

}  // namespace outfit
