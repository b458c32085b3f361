#pragma once

// Simulated rater panels. This is a test and benchmarking fixture standing in
// for human raters; nothing in the core library or the service depends on it.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "outfit/aggregation.hpp"
#include "outfit/catalog.hpp"
#include "outfit/recommenders.hpp"
#include "outfit/tuple_index.hpp"

namespace outfit::sim {

enum class RaterBehavior { Concordant, Noisy, Adversarial };

std::string_view to_string(RaterBehavior b);
RaterBehavior parse_behavior(std::string_view text);

struct RaterProfile {
  std::string rater_id;
  RaterBehavior behavior = RaterBehavior::Concordant;

  // Scoring. A concordant rater scores each recommended item against the
  // query and rates the list with the rounded mean:
  //   patterned query, solid item      -> 1 + solid_bonus (capped at 2)
  //   patterned query, patterned item  -> busy_penalty
  //   solid query,     patterned item  -> 1
  //   solid query,     solid item      -> 0
  int solid_bonus = 1;
  int busy_penalty = -1;
  double noise = 0.3;  ///< Noisy: chance that each model's rating is replaced by a uniform draw
  double lapse = 0.0;  ///< Concordant: chance that a rating slips one step up or down (clamped)

  // Timing: base_ms * (complex_factor for Complex queries) *
  //         (1 + busy_weight * fraction of patterned items) * exp(spread * N(0,1))
  double base_ms = 2500.0;
  double busy_weight = 0.8;
  double complex_factor = 1.6;
  double spread = 0.15;

  std::uint64_t seed = 0;
};

enum class PanelStyle {
  Uniform,  ///< every concordant rater uses the default profile
  Varied,   ///< concordant raters cycle through weaker/stronger versions of the same preference,
            ///< and occasionally slip by one step
};

/// `concordant` + `noisy` + `adversarial` profiles with ids r1, r2, ... in that
/// order. A uniform concordant panel agrees exactly, which the strict median
/// filter treats as degenerate; Varied keeps the preference direction but
/// spreads its strength and the rating speed.
std::vector<RaterProfile> make_panel(std::size_t concordant, std::size_t adversarial, std::size_t noisy = 0,
                                     std::uint64_t seed = 0, PanelStyle style = PanelStyle::Uniform);

struct SimulatedUnit {
  const Query* query = nullptr;
  RecommendationList dfr;
  RecommendationList sfr;
};

using InventoryLookup = std::map<std::string, const InventoryItem*, std::less<>>;
InventoryLookup make_lookup(std::span<const InventoryItem> inventory);

/// Concordant list rating for one query/list pair.
int concordant_rating(const RaterProfile& profile, bool query_patterned, const RecommendationList& list,
                      const InventoryLookup& items);

/// The value farthest from `v` on the 4-point scale.
constexpr int farthest_rating(int v) { return v >= 1 ? kMinRating : kMaxRating; }

/// Every profile rates both lists of every unit. Pure in (profiles, units, seed).
std::vector<RatingVector> simulate_raters(std::span<const RaterProfile> profiles,
                                          std::span<const SimulatedUnit> units, const InventoryLookup& items,
                                          std::uint64_t seed,
                                          double solidness_threshold = kDefaultSolidnessThreshold);

/// Two records per vector, in the ratings-file schema.
std::vector<RatingRecord> to_records(std::span<const RatingVector> vectors);

struct Benchmark {
  std::vector<SimulatedUnit> units;
  std::vector<RatingVector> vectors;
};

/// DFR and SFR lists for every query (SFR seeded per query from `seed`),
/// then a simulated panel rates them.
Benchmark run_benchmark(const TupleIndex& index, std::span<const InventoryItem> inventory,
                        std::span<const Query> queries, std::span<const RaterProfile> profiles,
                        std::uint64_t seed, std::size_t k = kDefaultListSize, const SfrOptions& sfr = {});

}  // namespace outfit::sim
