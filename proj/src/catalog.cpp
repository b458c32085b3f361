#include "outfit/catalog.hpp"

namespace outfit {

InventoryItem make_inventory_item(std::string item_id, std::string image_path,
                                  const ColorHistogram& feature,
                                  std::optional<PatternLabel> label, double solidness_threshold) {
  return {std::move(item_id), std::move(image_path), feature, label,
          solidness(feature, solidness_threshold)};
}

}  // namespace outfit
