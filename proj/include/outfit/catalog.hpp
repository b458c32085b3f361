#pragma once

#include <optional>
#include <string>

#include "outfit/feature.hpp"
#include "outfit/pattern.hpp"

namespace outfit {

/// A retrievable top from the clothing inventory.
struct InventoryItem {
  std::string item_id;
  std::string image_path;
  ColorHistogram feature;
  std::optional<PatternLabel> pattern_label;
  SolidnessVerdict solidness;
};

/// A skirt submitted to the recommenders.
struct Query {
  std::string query_id;
  std::string image_path;
  ColorHistogram feature;
  std::optional<PatternLabel> pattern_label;
};

InventoryItem make_inventory_item(std::string item_id, std::string image_path,
                                  const ColorHistogram& feature,
                                  std::optional<PatternLabel> label,
                                  double solidness_threshold = kDefaultSolidnessThreshold);

}  // namespace outfit
