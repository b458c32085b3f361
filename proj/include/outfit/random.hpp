#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace outfit {

/// Seeded generator used everywhere a result must be reproducible from a
/// 64-bit seed. The engine is std::mt19937_64, whose output sequence is fixed
/// by the standard; the helpers below replace the std distributions, whose
/// algorithms are left to the implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// FNV-1a over the bytes of `text`; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Seed for a (session, query) pair so a rating session can be replayed.
std::uint64_t derive_seed(std::string_view session_id, std::string_view query_id);

}  // namespace outfit
