#include <algorithm>
#include <cmath>

#include <omp.h>

#include "outfit/kernels.hpp"

namespace outfit::kernels {
namespace {

bool hit_less(const ScanHit& a, const ScanHit& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.order_key < b.order_key;
}

}  // namespace

double l1_distance(const double* a, const double* b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kHistogramSize; ++i) sum += std::fabs(a[i] - b[i]);
  return sum;
}

std::vector<ScanHit> topk_scan(const FeatureMatrixView& matrix, const ColorHistogram& query,
                               std::size_t k) {
  const std::size_t n = matrix.rows();
  const std::size_t want = std::min(k, n);
  std::vector<ScanHit> heap;  // max-heap under hit_less; front is the worst kept hit
  heap.reserve(want + 1);
  if (want == 0) return heap;

  const double* q = query.bins.data();
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = matrix.row(r);
    const ScanHit candidate{0.0, matrix.order_keys[r], static_cast<std::uint32_t>(r)};
    if (heap.size() < want) {
      ScanHit hit = candidate;
      hit.distance = l1_distance(q, row);
      heap.push_back(hit);
      std::push_heap(heap.begin(), heap.end(), hit_less);
      continue;
    }
    // Partial sums of non-negative terms never decrease, so once the running
    // sum passes the worst kept distance the row cannot enter the heap.
    const double worst = heap.front().distance;
    double sum = 0.0;
    std::size_t i = 0;
    for (; i < kHistogramSize; ++i) {
      sum += std::fabs(q[i] - row[i]);
      if (sum > worst) break;
    }
    if (i < kHistogramSize) continue;
    ScanHit hit = candidate;
    hit.distance = sum;
    if (hit_less(hit, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), hit_less);
      heap.back() = hit;
      std::push_heap(heap.begin(), heap.end(), hit_less);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), hit_less);
  return heap;
}

std::vector<std::vector<ScanHit>> topk_batch_serial(const FeatureMatrixView& matrix,
                                                    std::span<const ColorHistogram> queries,
                                                    std::size_t k) {
  std::vector<std::vector<ScanHit>> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) out[i] = topk_scan(matrix, queries[i], k);
  return out;
}

std::vector<std::vector<ScanHit>> topk_batch_omp(const FeatureMatrixView& matrix,
                                                 std::span<const ColorHistogram> queries,
                                                 std::size_t k) {
  std::vector<std::vector<ScanHit>> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = topk_scan(matrix, queries[i], k);
  return out;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace outfit::kernels
