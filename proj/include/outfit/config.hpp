#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "outfit/recommenders.hpp"

namespace outfit {

/// How a unit's per-item ratings become the single per-model value that
/// enters aggregation.
enum class RatingProtocol {
  PerItem,  ///< k item ratings, reduced to their mean rounded half away from zero
  PerList,  ///< one rating for the whole list
};

std::string_view to_string(RatingProtocol p);
RatingProtocol parse_rating_protocol(std::string_view text);

/// Runtime settings, read from a JSON file:
///
///   {
///     "solidness_threshold": 0.35,
///     "sfr_solid_query": "sample_patterned" | "reject",
///     "rating_protocol": "per_item" | "per_list",
///     "list_size": 10,
///     "elapsed_min_ms": 50,
///     "elapsed_max_ms": 1800000
///   }
///
/// Every key is optional.
struct Settings {
  double solidness_threshold = kDefaultSolidnessThreshold;
  SolidQueryPolicy sfr_solid_query = SolidQueryPolicy::SamplePatterned;
  RatingProtocol rating_protocol = RatingProtocol::PerItem;
  std::size_t list_size = kDefaultListSize;
  std::int64_t elapsed_min_ms = 50;
  std::int64_t elapsed_max_ms = 30 * 60 * 1000;

  SfrOptions sfr_options() const { return {solidness_threshold, sfr_solid_query}; }
};

/// Throws InvalidConfig on unknown keys, wrong types or out-of-range values.
Settings settings_from_json(std::string_view text);
Settings load_settings(const std::filesystem::path& path);
void validate(const Settings& s);

}  // namespace outfit
