#pragma once

// Test-only helpers and reference implementations. The reference code here is
// deliberately written without calling into the library's own algorithms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "outfit/aggregation.hpp"
#include "outfit/feature.hpp"
#include "outfit/tuple_index.hpp"

namespace outfit::testkit {

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("outfit-test-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Image random_image(std::mt19937_64& gen, int w, int h) {
  std::uniform_int_distribution<int> byte(0, 255);
  Image img(w, h);
  for (auto& p : img.pixels)
    p = {static_cast<std::uint8_t>(byte(gen)), static_cast<std::uint8_t>(byte(gen)),
         static_cast<std::uint8_t>(byte(gen))};
  return img;
}

/// Three independent L1-normalized blocks, optionally with a few exact zeros.
inline ColorHistogram random_histogram(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ColorHistogram h;
  auto fill = [&](std::size_t begin, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = u(gen) < 0.2 ? 0.0 : u(gen);
      h.bins[begin + i] = x;
      sum += x;
    }
    if (sum == 0.0) h.bins[begin] = sum = 1.0;
    for (std::size_t i = 0; i < n; ++i) h.bins[begin + i] /= sum;
  };
  fill(0, 24);
  fill(24, 8);
  fill(32, 8);
  return h;
}

// ---------------------------------------------------------------------------
// Colour binning, in integers only
// ---------------------------------------------------------------------------

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Hue bin (of 24) for an 8-bit pixel. The hexcone hue over 15 degrees is
/// 4 * (difference / delta) plus a sector offset of 0, 8 or 16.
inline int oracle_hue_bin(int r, int g, int b) {
  const int hi = std::max({r, g, b}), lo = std::min({r, g, b});
  const int d = hi - lo;
  if (hi == 0 || d == 0) return 0;
  long bin;
  if (hi == r) bin = floor_div(4L * (g - b), d);
  else if (hi == g) bin = floor_div(4L * (b - r), d) + 8;
  else bin = floor_div(4L * (r - g), d) + 16;
  return static_cast<int>(((bin % 24) + 24) % 24);
}

inline int oracle_sat_bin(int r, int g, int b) {
  const int hi = std::max({r, g, b}), lo = std::min({r, g, b});
  if (hi == 0) return 0;
  return std::min(8 * (hi - lo) / hi, 7);
}

inline int oracle_val_bin(int r, int g, int b) { return std::min(8 * std::max({r, g, b}) / 255, 7); }

inline std::array<double, 40> oracle_histogram(const Image& img) {
  std::array<long, 40> counts{};
  for (const auto& p : img.pixels) {
    ++counts[oracle_hue_bin(p.r, p.g, p.b)];
    ++counts[24 + oracle_sat_bin(p.r, p.g, p.b)];
    ++counts[32 + oracle_val_bin(p.r, p.g, p.b)];
  }
  std::array<double, 40> out{};
  const double n = static_cast<double>(img.pixels.size());
  for (std::size_t i = 0; i < 40; ++i) out[i] = static_cast<double>(counts[i]) / n;
  return out;
}

// ---------------------------------------------------------------------------
// Nearest neighbours by full sort
// ---------------------------------------------------------------------------

struct OracleHit {
  std::string tuple_id;
  std::string top_item_id;
  double distance;
};

inline double oracle_l1(const ColorHistogram& a, const ColorHistogram& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) s += std::fabs(a.bins[i] - b.bins[i]);
  return s;
}

inline std::vector<OracleHit> oracle_knn(const std::vector<OutfitTuple>& tuples, const ColorHistogram& q,
                                         std::size_t k) {
  std::vector<OracleHit> all;
  for (const auto& t : tuples) all.push_back({t.tuple_id, t.top_item_id, oracle_l1(t.skirt_feature, q)});
  std::stable_sort(all.begin(), all.end(), [](const OracleHit& a, const OracleHit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.tuple_id < b.tuple_id;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

/// Walks the full sorted order keeping the first occurrence of each top.
inline std::vector<std::string> oracle_dfr(const std::vector<OutfitTuple>& tuples, const ColorHistogram& q,
                                           std::size_t k) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& hit : oracle_knn(tuples, q, tuples.size())) {
    if (out.size() == k) break;
    if (seen.insert(hit.top_item_id).second) out.push_back(hit.top_item_id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rating aggregation, straight from raw records
// ---------------------------------------------------------------------------

struct OracleAggregate {
  double threshold = 0.0;
  std::size_t retained = 0;
  double r_dfr = 0.0;
  double r_sfr = 0.0;
};

inline OracleAggregate oracle_aggregate(const std::vector<RatingRecord>& records) {
  // (query, rater) -> {dfr, sfr}; -99 marks "missing"
  std::map<std::pair<std::string, std::string>, std::array<int, 2>> vecs;
  for (const auto& r : records) {
    auto [it, fresh] = vecs.try_emplace({r.query_id, r.rater_id}, std::array<int, 2>{-99, -99});
    it->second[r.model == ModelId::DFR ? 0 : 1] = r.value;
  }
  std::map<std::string, std::vector<std::array<int, 2>>> by_query;
  for (const auto& [key, v] : vecs)
    if (v[0] != -99 && v[1] != -99) by_query[key.first].push_back(v);

  std::map<std::string, std::vector<double>> gammas;
  std::vector<double> all;
  for (const auto& [q, vs] : by_query) {
    for (const auto& a : vs) {
      double g = 0.0;
      for (const auto& b : vs) g += std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]);
      gammas[q].push_back(g);
      all.push_back(g);
    }
  }
  OracleAggregate out;
  if (all.empty()) return out;
  std::sort(all.begin(), all.end());
  const std::size_t n = all.size();
  out.threshold = n % 2 ? all[n / 2] : (all[n / 2 - 1] + all[n / 2]) / 2.0;

  for (const auto& [q, vs] : by_query) {
    double sum_d = 0.0, sum_s = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (!(gammas[q][i] < out.threshold)) continue;
      ++kept;
      sum_d += vs[i][0];
      sum_s += vs[i][1];
    }
    out.retained += kept;
    if (kept == 0) continue;
    const double c = static_cast<double>(kept) / static_cast<double>(vs.size());
    out.r_dfr += c * (sum_d / static_cast<double>(kept));
    out.r_sfr += c * (sum_s / static_cast<double>(kept));
  }
  return out;
}

inline double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

inline RatingRecord make_record(std::string q, std::string r, ModelId m, int value, std::int64_t ms = 1000) {
  RatingRecord rec;
  rec.query_id = std::move(q);
  rec.rater_id = std::move(r);
  rec.model = m;
  rec.value = value;
  rec.elapsed_ms = ms;
  rec.timestamp = "2024-01-01T00:00:00Z";
  return rec;
}

}  // namespace outfit::testkit
