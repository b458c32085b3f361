#include "outfit/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "outfit/error.hpp"
#include "outfit/random.hpp"

namespace outfit::sim {
namespace {

int round_half_away(double x) { return static_cast<int>(std::lround(x)); }

double busy_fraction(const RecommendationList& list, const InventoryLookup& items) {
  if (list.entries.empty()) return 0.0;
  std::size_t busy = 0;
  for (const auto& e : list.entries) {
    const auto it = items.find(e.item_id);
    if (it != items.end() && !it->second->solidness.is_solid) ++busy;
  }
  return static_cast<double>(busy) / static_cast<double>(list.entries.size());
}

}  // namespace

std::string_view to_string(RaterBehavior b) {
  switch (b) {
    case RaterBehavior::Concordant: return "concordant";
    case RaterBehavior::Noisy: return "noisy";
    case RaterBehavior::Adversarial: return "adversarial";
  }
  return "?";
}

RaterBehavior parse_behavior(std::string_view text) {
  if (text == "concordant") return RaterBehavior::Concordant;
  if (text == "noisy") return RaterBehavior::Noisy;
  if (text == "adversarial") return RaterBehavior::Adversarial;
  throw Error(ErrorCode::InvalidArgument, "unknown rater behavior: " + std::string(text));
}

std::vector<RaterProfile> make_panel(std::size_t concordant, std::size_t adversarial, std::size_t noisy,
                                     std::uint64_t seed, PanelStyle style) {
  std::vector<RaterProfile> out;
  // (solid_bonus, busy_penalty, speed) per concordant slot
  static constexpr struct {
    int bonus, penalty;
    double speed;
  } kVariants[] = {{1, -1, 1.0}, {0, -1, 0.9}, {1, 0, 1.1}, {1, -1, 0.95}, {0, 0, 1.05}};
  constexpr double kVariedLapse = 0.15;
  auto add = [&](RaterBehavior b) {
    RaterProfile p;
    p.rater_id = "r" + std::to_string(out.size() + 1);
    p.behavior = b;
    p.seed = seed + out.size();
    out.push_back(p);
  };
  for (std::size_t i = 0; i < concordant; ++i) {
    add(RaterBehavior::Concordant);
    if (style == PanelStyle::Uniform) continue;
    const auto& v = kVariants[i % std::size(kVariants)];
    out.back().solid_bonus = v.bonus;
    out.back().busy_penalty = v.penalty;
    out.back().base_ms *= v.speed;
    out.back().lapse = kVariedLapse;
  }
  for (std::size_t i = 0; i < noisy; ++i) add(RaterBehavior::Noisy);
  for (std::size_t i = 0; i < adversarial; ++i) add(RaterBehavior::Adversarial);
  return out;
}

InventoryLookup make_lookup(std::span<const InventoryItem> inventory) {
  InventoryLookup out;
  for (const auto& item : inventory) out.emplace(item.item_id, &item);
  return out;
}

int concordant_rating(const RaterProfile& p, bool query_patterned, const RecommendationList& list,
                      const InventoryLookup& items) {
  if (list.entries.empty()) return 0;
  double sum = 0.0;
  for (const auto& e : list.entries) {
    const auto it = items.find(e.item_id);
    if (it == items.end()) throw Error(ErrorCode::DanglingReference, "unknown item " + e.item_id);
    const bool solid = it->second->solidness.is_solid;
    int score;
    if (query_patterned) score = solid ? std::min(kMaxRating, 1 + p.solid_bonus) : p.busy_penalty;
    else score = solid ? 0 : 1;
    sum += std::clamp(score, kMinRating, kMaxRating);
  }
  return std::clamp(round_half_away(sum / static_cast<double>(list.entries.size())), kMinRating, kMaxRating);
}

std::vector<RatingVector> simulate_raters(std::span<const RaterProfile> profiles,
                                          std::span<const SimulatedUnit> units, const InventoryLookup& items,
                                          std::uint64_t seed, double solidness_threshold) {
  std::vector<RatingVector> out;
  out.reserve(profiles.size() * units.size());
  for (const auto& unit : units) {
    const Query& q = *unit.query;
    const bool patterned = !solidness(q.feature, solidness_threshold).is_solid;
    const bool complex = q.pattern_label && classify_pattern(*q.pattern_label) == PatternClass::Complex;
    for (const auto& p : profiles) {
      Rng rng(derive_seed(std::to_string(seed ^ p.seed) + "/" + p.rater_id, q.query_id));
      RatingVector v;
      v.query_id = q.query_id;
      v.rater_id = p.rater_id;
      const RecommendationList* lists[2] = {&unit.dfr, &unit.sfr};
      for (std::size_t m = 0; m < 2; ++m) {
        int value = concordant_rating(p, patterned, *lists[m], items);
        if (p.behavior == RaterBehavior::Adversarial) value = farthest_rating(value);
        if (p.behavior == RaterBehavior::Concordant && p.lapse > 0.0 && rng.uniform() < p.lapse) {
          const int step = rng.below(2) ? 1 : -1;
          value = std::clamp(value + step, kMinRating, kMaxRating);
        }
        if (p.behavior == RaterBehavior::Noisy && rng.uniform() < p.noise)
          value = kMinRating + static_cast<int>(rng.below(kRatingLevels));
        v.values[m] = value;

        const double mean = p.base_ms * (complex ? p.complex_factor : 1.0) *
                            (1.0 + p.busy_weight * busy_fraction(*lists[m], items));
        v.elapsed_ms[m] = std::max<std::int64_t>(1, std::llround(mean * std::exp(p.spread * rng.normal())));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<RatingRecord> to_records(std::span<const RatingVector> vectors) {
  std::vector<RatingRecord> out;
  out.reserve(vectors.size() * 2);
  for (const auto& v : vectors)
    for (ModelId m : kAllModels) {
      const std::size_t slot = m == ModelId::DFR ? 0 : 1;
      RatingRecord r;
      r.query_id = v.query_id;
      r.rater_id = v.rater_id;
      r.model = m;
      r.value = v.values[slot];
      r.elapsed_ms = v.elapsed_ms[slot];
      r.timestamp = v.submitted_at;
      out.push_back(std::move(r));
    }
  return out;
}

Benchmark run_benchmark(const TupleIndex& index, std::span<const InventoryItem> inventory,
                        std::span<const Query> queries, std::span<const RaterProfile> profiles,
                        std::uint64_t seed, std::size_t k, const SfrOptions& sfr) {
  Benchmark b;
  b.units.reserve(queries.size());
  for (const auto& q : queries) {
    SimulatedUnit u;
    u.query = &q;
    u.dfr = dfr_recommend(index, q, k);
    u.sfr = sfr_recommend(inventory, q, k, derive_seed("benchmark-" + std::to_string(seed), q.query_id), sfr);
    b.units.push_back(std::move(u));
  }
  b.vectors = simulate_raters(profiles, b.units, make_lookup(inventory), seed, sfr.solidness_threshold);
  return b;
}

}  // namespace outfit::sim
