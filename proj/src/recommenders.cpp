#include "outfit/recommenders.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "outfit/error.hpp"
#include "outfit/random.hpp"

namespace outfit {

std::string_view to_string(ModelId model) { return model == ModelId::DFR ? "DFR" : "SFR"; }

ModelId parse_model(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "DFR") return ModelId::DFR;
  if (upper == "SFR") return ModelId::SFR;
  throw Error(ErrorCode::UnknownModel, "unknown model: " + std::string(text));
}

RecommendationList dfr_recommend(const TupleIndex& index, const Query& query, std::size_t k) {
  if (index.size() == 0) throw Error(ErrorCode::EmptyIndex, "index is empty");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");

  RecommendationList list{query.query_id, ModelId::DFR, k, {}, std::nullopt};
  // Widen the neighbour window until it holds k distinct tops or covers the index.
  std::size_t window = k;
  for (;;) {
    const auto neighbors = index.query(query.feature, window);
    list.entries.clear();
    std::unordered_set<std::string_view> seen;
    for (const auto& n : neighbors) {
      if (!seen.insert(n.top_item_id).second) continue;
      list.entries.push_back({n.top_item_id, n.distance});
      if (list.entries.size() == k) break;
    }
    if (list.entries.size() == k || window >= index.size()) break;
    window = std::min(index.size(), window * 2);
  }
  return list;
}

std::size_t dominant_hue_bin(const ColorHistogram& feature) {
  const auto hue = feature.hue();
  return static_cast<std::size_t>(std::max_element(hue.begin(), hue.end()) - hue.begin());
}

std::size_t circular_bin_distance(std::size_t a, std::size_t b) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, kHueBins - d);
}

RecommendationList sfr_recommend(std::span<const InventoryItem> inventory, const Query& query,
                                 std::size_t k, std::uint64_t seed, const SfrOptions& options) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const bool query_solid = solidness(query.feature, options.solidness_threshold).is_solid;
  if (query_solid && options.solid_query == SolidQueryPolicy::Reject)
    throw Error(ErrorCode::UnsupportedQuery, "SFR is configured for patterned queries only: " +
                                                 query.query_id);

  // Eligible subset in item_id order so the result does not depend on inventory order.
  std::vector<const InventoryItem*> eligible;
  for (const auto& item : inventory)
    if (item.solidness.is_solid != query_solid) eligible.push_back(&item);
  if (eligible.empty())
    throw Error(ErrorCode::NoEligibleItems, std::string("inventory has no ") +
                                                (query_solid ? "patterned" : "solid") + " items");
  std::sort(eligible.begin(), eligible.end(),
            [](const InventoryItem* a, const InventoryItem* b) { return a->item_id < b->item_id; });

  Rng rng(seed);
  RecommendationList list{query.query_id, ModelId::SFR, k, {}, std::nullopt};
  const std::size_t take = std::min(k, eligible.size());

  if (!query_solid) {
    const auto target = static_cast<std::size_t>(rng.below(kHueBins));
    list.sampled_hue_bin = target;
    std::vector<std::pair<std::size_t, const InventoryItem*>> ranked;
    ranked.reserve(eligible.size());
    for (const auto* item : eligible)
      ranked.emplace_back(circular_bin_distance(dominant_hue_bin(item->feature), target), item);
    // eligible is already id-sorted, so a stable sort on distance breaks ties by id.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < take; ++i)
      list.entries.push_back({ranked[i].second->item_id, static_cast<double>(ranked[i].first)});
  } else {
    // Partial Fisher-Yates: the first `take` slots are a uniform draw without replacement.
    const double p = 1.0 / static_cast<double>(eligible.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
      std::swap(eligible[i], eligible[j]);
      list.entries.push_back({eligible[i]->item_id, p});
    }
  }
  return list;
}

}  // namespace outfit
