#include "outfit/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "outfit/error.hpp"

namespace outfit {

std::string_view to_string(PatternLabel label) {
  switch (label) {
    case PatternLabel::Polka: return "Polka";
    case PatternLabel::Solids: return "Solids";
    case PatternLabel::Stripes: return "Stripes";
    case PatternLabel::Plaids: return "Plaids";
    case PatternLabel::Animal: return "Animal";
    case PatternLabel::Floral: return "Floral";
    case PatternLabel::Geometric: return "Geometric";
    case PatternLabel::Paisley: return "Paisley";
  }
  return "?";
}

std::string_view to_string(PatternClass cls) {
  return cls == PatternClass::Simple ? "Simple" : "Complex";
}

PatternLabel parse_pattern_label(std::string_view text) {
  for (PatternLabel label : kAllPatternLabels)
    if (to_string(label) == text) return label;
  throw Error(ErrorCode::UnknownLabel, "unknown pattern label: " + std::string(text));
}

PatternClass parse_pattern_class(std::string_view text) {
  if (text == "Simple") return PatternClass::Simple;
  if (text == "Complex") return PatternClass::Complex;
  throw Error(ErrorCode::UnknownLabel, "unknown pattern class: " + std::string(text));
}

PatternClass classify_pattern(PatternLabel label) {
  switch (label) {
    case PatternLabel::Polka:
    case PatternLabel::Solids:
    case PatternLabel::Stripes:
    case PatternLabel::Plaids:
      return PatternClass::Simple;
    default:
      return PatternClass::Complex;
  }
}

PatternClass classify_pattern(std::string_view label) {
  return classify_pattern(parse_pattern_label(label));
}

SolidnessVerdict solidness(const ColorHistogram& feature, double threshold) {
  double entropy = 0.0;
  for (double p : feature.hue())
    if (p > 0.0) entropy -= p * std::log(p);
  const double score = std::clamp(entropy / std::log(static_cast<double>(kHueBins)), 0.0, 1.0);
  return {score < threshold, score};
}

}  // namespace outfit
