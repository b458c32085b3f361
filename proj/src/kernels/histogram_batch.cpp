#include <exception>

#include "outfit/kernels.hpp"

namespace outfit::kernels {

std::vector<ColorHistogram> histograms_serial(std::span<const Image> images) {
  std::vector<ColorHistogram> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out[i] = extract_histogram(images[i]);
  return out;
}

std::vector<ColorHistogram> histograms_omp(std::span<const Image> images) {
  std::vector<ColorHistogram> out(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
  // Exceptions must not escape an OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = extract_histogram(images[i]);
    } catch (...) {
#pragma omp critical(outfit_histogram_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace outfit::kernels
