#pragma once

// In-memory corpora built straight from histograms, for tests that exercise
// recommenders, the simulator and aggregation without touching image files.

#include <random>
#include <string>
#include <vector>

#include "outfit/catalog.hpp"
#include "outfit/pattern.hpp"
#include "outfit/tuple_index.hpp"
#include "support.hpp"

namespace outfit::testkit {

inline ColorHistogram solid_histogram(std::mt19937_64& gen) {
  ColorHistogram h;
  const std::size_t bin = gen() % kHueBins;
  const double spill = std::uniform_real_distribution<double>(0.0, 0.05)(gen);
  h.bins[bin] = 1.0 - spill;
  h.bins[(bin + 1) % kHueBins] = spill;
  h.bins[kSaturationOffset + 4 + gen() % 4] = 1.0;
  h.bins[kValueOffset + 4 + gen() % 4] = 1.0;
  return h;
}

struct World {
  std::vector<InventoryItem> inventory;
  std::vector<OutfitTuple> tuples;
  TupleIndex index;
  std::vector<Query> queries;
};

struct WorldShape {
  std::size_t solid_tops = 60;
  std::size_t patterned_tops = 60;
  std::size_t tuples = 400;
  std::size_t queries = 40;
  bool solid_queries = true;  ///< include Solids among query labels
};

inline World make_world(std::uint64_t seed, const WorldShape& shape = {}) {
  std::mt19937_64 gen(seed);
  World w;
  for (std::size_t i = 0; i < shape.solid_tops + shape.patterned_tops; ++i) {
    const bool solid = i < shape.solid_tops;
    char id[32];
    std::snprintf(id, sizeof id, "inv-%05zu", i + 1);
    w.inventory.push_back(make_inventory_item(id, "", solid ? solid_histogram(gen) : random_histogram(gen),
                                              solid ? PatternLabel::Solids : PatternLabel::Floral));
  }
  for (std::size_t i = 0; i < shape.tuples; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "tup-%05zu", i + 1);
    const bool solid_skirt = gen() % 4 == 0;
    w.tuples.push_back({id, solid_skirt ? solid_histogram(gen) : random_histogram(gen),
                        w.inventory[gen() % w.inventory.size()].item_id});
  }
  w.index = build_index(w.tuples);
  for (std::size_t i = 0; i < shape.queries; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "q-%05zu", i + 1);
    PatternLabel label;
    do label = kAllPatternLabels[gen() % kAllPatternLabels.size()];
    while (!shape.solid_queries && label == PatternLabel::Solids);
    w.queries.push_back({id, "", label == PatternLabel::Solids ? solid_histogram(gen) : random_histogram(gen), label});
  }
  return w;
}

}  // namespace outfit::testkit
