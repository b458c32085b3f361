#pragma once

// Data-parallel inner loops. Each kernel has a serial form, which is the
// reference the tests compare against, and an OpenMP form that splits the
// outer loop (images, or queries) across threads. Results are identical by
// construction: every output element is computed by exactly the same code.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "outfit/feature.hpp"

namespace outfit::kernels {

/// Read-only view of an N x 40 row-major feature matrix plus the rank of
/// each row's identifier in lexicographic order (used for tie-breaking).
struct FeatureMatrixView {
  std::span<const double> data;
  std::span<const std::uint32_t> order_keys;

  std::size_t rows() const { return order_keys.size(); }
  const double* row(std::size_t i) const { return data.data() + i * kHistogramSize; }
};

struct ScanHit {
  double distance = 0.0;
  std::uint32_t order_key = 0;
  std::uint32_t row = 0;
};

/// L1 distance summed left to right over the 40 bins.
double l1_distance(const double* a, const double* b);

/// The min(k, rows) rows nearest to `query` under L1, ordered by
/// (distance, order_key). Bounded max-heap with early abandoning of rows
/// whose partial sum already exceeds the current k-th distance.
std::vector<ScanHit> topk_scan(const FeatureMatrixView& matrix, const ColorHistogram& query,
                               std::size_t k);

std::vector<std::vector<ScanHit>> topk_batch_serial(const FeatureMatrixView& matrix,
                                                    std::span<const ColorHistogram> queries,
                                                    std::size_t k);
std::vector<std::vector<ScanHit>> topk_batch_omp(const FeatureMatrixView& matrix,
                                                 std::span<const ColorHistogram> queries,
                                                 std::size_t k);

std::vector<ColorHistogram> histograms_serial(std::span<const Image> images);
std::vector<ColorHistogram> histograms_omp(std::span<const Image> images);

/// Threads OpenMP will use for the *_omp kernels.
int max_threads();

}  // namespace outfit::kernels
