#pragma once

#include <array>
#include <string_view>

#include "outfit/feature.hpp"

namespace outfit {

enum class PatternLabel { Polka, Solids, Stripes, Plaids, Animal, Floral, Geometric, Paisley };

inline constexpr std::array<PatternLabel, 8> kAllPatternLabels = {
    PatternLabel::Polka,  PatternLabel::Solids, PatternLabel::Stripes,   PatternLabel::Plaids,
    PatternLabel::Animal, PatternLabel::Floral, PatternLabel::Geometric, PatternLabel::Paisley};

enum class PatternClass { Simple, Complex };

std::string_view to_string(PatternLabel label);
std::string_view to_string(PatternClass cls);

/// Exact, case-sensitive match against the eight-label vocabulary.
/// Throws UnknownLabel otherwise.
PatternLabel parse_pattern_label(std::string_view text);
PatternClass parse_pattern_class(std::string_view text);

/// Polka, Solids, Stripes, Plaids are Simple; the rest are Complex.
PatternClass classify_pattern(PatternLabel label);
PatternClass classify_pattern(std::string_view label);

inline constexpr double kDefaultSolidnessThreshold = 0.35;

struct SolidnessVerdict {
  bool is_solid = false;
  double score = 0.0;  ///< normalized hue entropy in [0, 1]
};

/// Hue-block Shannon entropy divided by log(24); solid when below `threshold`.
SolidnessVerdict solidness(const ColorHistogram& feature,
                           double threshold = kDefaultSolidnessThreshold);

}  // namespace outfit
