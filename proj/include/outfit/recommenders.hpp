#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outfit/catalog.hpp"
#include "outfit/tuple_index.hpp"

namespace outfit {

enum class ModelId { DFR, SFR };

inline constexpr std::array<ModelId, 2> kAllModels = {ModelId::DFR, ModelId::SFR};
inline constexpr std::size_t kDefaultListSize = 10;

std::string_view to_string(ModelId model);
/// Accepts "DFR"/"SFR" in any letter case. Throws UnknownModel.
ModelId parse_model(std::string_view text);

struct RecommendationEntry {
  std::string item_id;
  double score = 0.0;  ///< DFR: L1 distance; SFR: circular hue-bin distance or draw probability
};

struct RecommendationList {
  std::string query_id;
  ModelId model = ModelId::DFR;
  std::size_t k = kDefaultListSize;
  std::vector<RecommendationEntry> entries;
  /// SFR on a patterned query: the hue bin drawn as the target color.
  std::optional<std::size_t> sampled_hue_bin;
};

/// Tops of the nearest indexed skirts, duplicate tops collapsed to their best
/// rank and the list refilled from further neighbours until k unique items
/// (or the index) is exhausted.
RecommendationList dfr_recommend(const TupleIndex& index, const Query& query,
                                 std::size_t k = kDefaultListSize);

enum class SolidQueryPolicy {
  SamplePatterned,  ///< solid query -> k patterned items drawn uniformly without replacement
  Reject,           ///< solid query -> UnsupportedQuery
};

struct SfrOptions {
  double solidness_threshold = kDefaultSolidnessThreshold;
  SolidQueryPolicy solid_query = SolidQueryPolicy::SamplePatterned;
};

/// Patterned query: draw a hue bin uniformly, then return the k solid items
/// whose dominant hue bin is circularly nearest to it (ties by item_id).
/// Pure function of its arguments; the generator lives only inside the call.
/// Throws NoEligibleItems when the target class is absent from the inventory.
RecommendationList sfr_recommend(std::span<const InventoryItem> inventory, const Query& query,
                                 std::size_t k, std::uint64_t seed, const SfrOptions& options = {});

/// Index of the heaviest hue bin (lowest index on ties).
std::size_t dominant_hue_bin(const ColorHistogram& feature);

std::size_t circular_bin_distance(std::size_t a, std::size_t b);

}  // namespace outfit
