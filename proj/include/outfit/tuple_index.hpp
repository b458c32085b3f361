#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "outfit/feature.hpp"
#include "outfit/kernels.hpp"

namespace outfit {

/// A <skirt, top> pair observed together in one outfit photograph.
struct OutfitTuple {
  std::string tuple_id;
  ColorHistogram skirt_feature;
  std::string top_item_id;
};

struct Neighbor {
  std::string top_item_id;
  std::string tuple_id;
  double distance = 0.0;
  std::size_t rank = 0;  ///< 1-based
};

/// L1 over all 40 bins.
double distance(const ColorHistogram& a, const ColorHistogram& b);

enum class Execution { Serial, Parallel };

/// Immutable exact-scan index over tuple skirt features. Features live in a
/// contiguous N x 40 matrix; row i is tuple i in build order. Safe for
/// concurrent queries.
class TupleIndex {
 public:
  /// Throws EmptyTrainingSet or DuplicateTupleId.
  static TupleIndex build(std::vector<OutfitTuple> tuples);

  std::size_t size() const { return ids_.size(); }
  const std::string& tuple_id(std::size_t row) const { return ids_[row]; }
  const std::string& top_item_id(std::size_t row) const { return tops_[row]; }
  ColorHistogram skirt_feature(std::size_t row) const;
  OutfitTuple tuple(std::size_t row) const;

  kernels::FeatureMatrixView matrix() const { return {matrix_, order_keys_}; }

  /// min(k, N) nearest tuples, ties broken by ascending tuple_id.
  /// Throws EmptyIndex (never, for a built index) and InvalidArgument for k = 0.
  std::vector<Neighbor> query(const ColorHistogram& q, std::size_t k) const;

  std::vector<std::vector<Neighbor>> query_batch(std::span<const ColorHistogram> queries,
                                                 std::size_t k,
                                                 Execution exec = Execution::Parallel) const;

  /// Binary layout, all integers little-endian:
  ///   "OTIX" | version u8 (=1) | N u64 |
  ///   N x ( u32 len | tuple_id bytes | 40 x f64 | u32 len | top_item_id bytes )
  void save(const std::string& path) const;
  static TupleIndex load(const std::string& path);

 private:
  std::vector<Neighbor> to_neighbors(const std::vector<kernels::ScanHit>& hits) const;

  std::vector<std::string> ids_;
  std::vector<std::string> tops_;
  std::vector<double> matrix_;
  std::vector<std::uint32_t> order_keys_;
};

inline TupleIndex build_index(std::vector<OutfitTuple> tuples) {
  return TupleIndex::build(std::move(tuples));
}

inline std::vector<Neighbor> query_knn(const TupleIndex& index, const ColorHistogram& q,
                                       std::size_t k) {
  return index.query(q, k);
}

}  // namespace outfit
