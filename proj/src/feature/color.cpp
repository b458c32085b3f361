#include <algorithm>
#include <cmath>

#include "outfit/feature.hpp"

namespace outfit {

HsvTriple rgb_to_hsv(Pixel p) {
  const int r = p.r, g = p.g, b = p.b;
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  const int delta = hi - lo;

  HsvTriple out;
  out.v = hi / 255.0;
  if (hi == 0 || delta == 0) return out;
  out.s = static_cast<double>(delta) / hi;

  double h;
  if (hi == r) {
    h = 60.0 * (static_cast<double>(g - b) / delta);
    if (h < 0.0) h += 360.0;
  } else if (hi == g) {
    h = 60.0 * (static_cast<double>(b - r) / delta + 2.0);
  } else {
    h = 60.0 * (static_cast<double>(r - g) / delta + 4.0);
  }
  out.h = h >= 360.0 ? h - 360.0 : h;
  return out;
}

Pixel hsv_to_rgb(HsvTriple hsv) {
  const double h = std::fmod(std::fmod(hsv.h, 360.0) + 360.0, 360.0) / 60.0;
  const double s = std::clamp(hsv.s, 0.0, 1.0);
  const double v = std::clamp(hsv.v, 0.0, 1.0);
  const double c = v * s;
  const double x = c * (1.0 - std::fabs(std::fmod(h, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto channel = [](double f) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(f * 255.0), 0L, 255L));
  };
  return {channel(r + m), channel(g + m), channel(b + m)};
}

std::size_t hue_bin(double h) {
  const auto bin = static_cast<std::size_t>(h / (360.0 / kHueBins));
  return std::min(bin, kHueBins - 1);
}

std::size_t saturation_bin(double s) {
  const auto bin = static_cast<std::size_t>(s * kSaturationBins);
  return std::min(bin, kSaturationBins - 1);
}

std::size_t value_bin(double v) {
  const auto bin = static_cast<std::size_t>(v * kValueBins);
  return std::min(bin, kValueBins - 1);
}

}  // namespace outfit
