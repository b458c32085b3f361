#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "outfit/dataset.hpp"
#include "outfit/error.hpp"
#include "outfit/random.hpp"

namespace fs = std::filesystem;

namespace outfit {
namespace {

constexpr double kBinWidth = 360.0 / kHueBins;

/// Fully saturated-ish color centred in a hue bin, so 8-bit rounding never
/// pushes it into a neighbouring bin.
Pixel bin_color(std::size_t bin, Rng& rng) {
  const double h = (static_cast<double>(bin % kHueBins) + 0.5) * kBinWidth + rng.uniform(-3.0, 3.0);
  return hsv_to_rgb({h, rng.uniform(0.55, 0.95), rng.uniform(0.55, 0.95)});
}

/// n colors in distinct hue bins, evenly spread from a random starting bin.
std::vector<Pixel> palette(std::size_t n, Rng& rng) {
  const std::size_t start = rng.below(kHueBins);
  std::vector<Pixel> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(bin_color(start + i * kHueBins / n, rng));
  return out;
}

/// Smooth lattice noise in [0, 1).
class ValueNoise {
 public:
  ValueNoise(int cells, Rng& rng) : cells_(cells), lattice_(static_cast<std::size_t>((cells + 1) * (cells + 1))) {
    for (auto& v : lattice_) v = rng.uniform();
  }
  double at(double u, double v) const {  // u, v in [0, 1]
    const double x = u * cells_, y = v * cells_;
    const int x0 = std::min(static_cast<int>(x), cells_ - 1), y0 = std::min(static_cast<int>(y), cells_ - 1);
    const double fx = smooth(x - x0), fy = smooth(y - y0);
    const double a = node(x0, y0), b = node(x0 + 1, y0), c = node(x0, y0 + 1), d = node(x0 + 1, y0 + 1);
    return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
  }

 private:
  static double smooth(double t) { return t * t * (3 - 2 * t); }
  double node(int x, int y) const { return lattice_[static_cast<std::size_t>(y * (cells_ + 1) + x)]; }
  int cells_;
  std::vector<double> lattice_;
};

Image render_solid(int size, Rng& rng) { return Image(size, size, bin_color(rng.below(kHueBins), rng)); }

Image render_polka(int size, Rng& rng) {
  const auto colors = palette(12, rng);
  Image img(size, size, colors[0]);
  const int spacing = std::max(4, size / 6);
  const double radius = 0.45 * spacing;
  const std::size_t phase = rng.below(11);
  std::size_t dot = 0;
  for (int cy = spacing / 2; cy < size + spacing / 2; cy += spacing) {
    for (int cx = spacing / 2; cx < size + spacing / 2; cx += spacing, ++dot) {
      const Pixel c = colors[1 + (dot + phase) % 11];
      for (int y = std::max(0, cy - spacing); y < std::min(size, cy + spacing); ++y)
        for (int x = std::max(0, cx - spacing); x < std::min(size, cx + spacing); ++x) {
          const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
          if (dx * dx + dy * dy <= radius * radius) img.at(x, y) = c;
        }
    }
  }
  return img;
}

Image render_stripes(int size, Rng& rng) {
  const auto colors = palette(12, rng);
  const int width = std::max(1, size / 12);
  const bool vertical = rng.below(2) == 0;
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) img.at(x, y) = colors[static_cast<std::size_t>((vertical ? x : y) / width) % 12];
  return img;
}

Image render_plaid(int size, Rng& rng) {
  const auto colors = palette(12, rng);
  const int band = std::max(1, size / 12);
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const int i = x / band, j = y / band;
      std::size_t idx;
      if (i % 2 && j % 2) idx = static_cast<std::size_t>(i + j) % 12;
      else if (i % 2) idx = static_cast<std::size_t>(i) % 12;
      else if (j % 2) idx = static_cast<std::size_t>(j + 5) % 12;
      else idx = 0;
      img.at(x, y) = colors[idx];
    }
  return img;
}

Image render_animal(int size, Rng& rng) {
  const double base = rng.uniform(0.0, 360.0);
  const ValueNoise hue(4, rng), spots(6, rng);
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5) / size, v = (y + 0.5) / size;
      const double h = base + 240.0 * hue.at(u, v);
      const bool spot = spots.at(u, v) > 0.62;
      img.at(x, y) = hsv_to_rgb({h, 0.8, spot ? 0.25 : 0.85});
    }
  return img;
}

Image render_floral(int size, Rng& rng) {
  const double ground = rng.uniform(0.0, 360.0);
  const ValueNoise leaf(3, rng);
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      img.at(x, y) = hsv_to_rgb({ground + 90.0 * leaf.at((x + 0.5) / size, (y + 0.5) / size), 0.7, 0.7});
  const int flowers = 5 + static_cast<int>(rng.below(4));
  for (int f = 0; f < flowers; ++f) {
    const double cx = rng.uniform(0, size), cy = rng.uniform(0, size);
    const double r = size * rng.uniform(0.12, 0.22);
    const double petal_hue = rng.uniform(0.0, 360.0);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
        const double rho = std::hypot(dx, dy), theta = std::atan2(dy, dx);
        if (rho > r * (0.55 + 0.45 * std::fabs(std::cos(2.5 * theta)))) continue;
        const double h = petal_hue + 25.0 * theta / std::numbers::pi;
        img.at(x, y) = hsv_to_rgb({h, 0.85, 0.9});
      }
  }
  return img;
}

Image render_geometric(int size, Rng& rng) {
  const auto colors = palette(16, rng);
  const int cell = std::max(2, size / 6);
  const int cells = (size + cell - 1) / cell;
  std::vector<std::size_t> upper(static_cast<std::size_t>(cells * cells)), lower(upper.size());
  for (auto& c : upper) c = rng.below(colors.size());
  for (auto& c : lower) c = rng.below(colors.size());
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const auto k = static_cast<std::size_t>((y / cell) * cells + x / cell);
      const bool above = (x % cell) > (y % cell);
      img.at(x, y) = colors[above ? upper[k] : lower[k]];
    }
  return img;
}

Image render_paisley(int size, Rng& rng) {
  const double base = rng.uniform(0.0, 360.0);
  const double twist = rng.uniform(1.5, 3.0);
  const double cx = size * rng.uniform(0.3, 0.7), cy = size * rng.uniform(0.3, 0.7);
  Image img(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double turn = std::atan2(dy, dx) / (2 * std::numbers::pi) + twist * std::hypot(dx, dy) / size;
      const double h = base + 360.0 * (turn - std::floor(turn));
      const double v = 0.6 + 0.3 * std::fabs(std::sin(6.0 * turn * std::numbers::pi));
      img.at(x, y) = hsv_to_rgb({h, 0.75, v});
    }
  return img;
}

std::size_t total(const LabelCounts& counts) {
  std::size_t n = 0;
  for (const auto& [label, c] : counts) n += c;
  return n;
}

struct Rendered {
  std::string id;
  std::string relative_path;
  PatternLabel label;
  ColorHistogram feature;
};

std::vector<Rendered> render_role(const LabelCounts& counts, std::string_view prefix, const fs::path& root,
                                  int size, std::uint64_t seed) {
  const fs::path dir = root / "images" / std::string(prefix);
  if (total(counts) > 0) fs::create_directories(dir);
  std::vector<Rendered> out;
  std::size_t n = 0;
  for (PatternLabel label : kAllPatternLabels) {
    const auto it = counts.find(label);
    if (it == counts.end()) continue;
    for (std::size_t i = 0; i < it->second; ++i, ++n) {
      char name[64];
      std::snprintf(name, sizeof name, "%s-%05zu", std::string(prefix).c_str(), n + 1);
      const Image img = render_swatch(label, size, derive_seed(std::to_string(seed), name));
      const std::string rel = "images/" + std::string(prefix) + "/" + name + ".png";
      write_png((root / rel).string(), img);
      out.push_back({name, rel, label, extract_histogram(img)});
    }
  }
  return out;
}

}  // namespace

LabelCounts parse_label_counts(std::string_view text) {
  LabelCounts out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, "expected Label=count, got '" + std::string(item) + "'");
    PatternLabel label;
    try {
      label = parse_pattern_label(item.substr(0, eq));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
    std::size_t count = 0;
    const auto num = item.substr(eq + 1);
    for (char c : num) {
      if (c < '0' || c > '9') throw Error(ErrorCode::InvalidConfig, "bad count in '" + std::string(item) + "'");
      count = count * 10 + static_cast<std::size_t>(c - '0');
    }
    if (num.empty()) throw Error(ErrorCode::InvalidConfig, "missing count in '" + std::string(item) + "'");
    out[label] += count;
  }
  return out;
}

Image render_swatch(PatternLabel label, int size, std::uint64_t seed) {
  Rng rng(seed);
  switch (label) {
    case PatternLabel::Solids: return render_solid(size, rng);
    case PatternLabel::Polka: return render_polka(size, rng);
    case PatternLabel::Stripes: return render_stripes(size, rng);
    case PatternLabel::Plaids: return render_plaid(size, rng);
    case PatternLabel::Animal: return render_animal(size, rng);
    case PatternLabel::Floral: return render_floral(size, rng);
    case PatternLabel::Geometric: return render_geometric(size, rng);
    case PatternLabel::Paisley: return render_paisley(size, rng);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pattern label");
}

GeneratedDataset generate_synthetic(const GeneratorConfig& config, const fs::path& root) {
  if (config.image_size < 8 || config.image_size > 1024)
    throw Error(ErrorCode::InvalidConfig, "image_size must be in [8, 1024], got " + std::to_string(config.image_size));
  if (total(config.inventory) + total(config.tuple_skirts) + total(config.queries) == 0)
    throw Error(ErrorCode::InvalidConfig, "nothing to generate: all counts are zero");
  if (total(config.tuple_skirts) > 0 && total(config.inventory) == 0)
    throw Error(ErrorCode::InvalidConfig, "tuples need an inventory of tops to pair with");

  fs::create_directories(root);
  GeneratedDataset out{root, {}, {}, {}};

  const auto tops = render_role(config.inventory, "inv", root, config.image_size, config.seed);
  if (!tops.empty()) {
    DatasetManifest m{ManifestRole::Inventory, root / kInventoryManifestName, {}};
    for (const auto& r : tops) m.records.push_back({r.id, r.relative_path, "", r.label, "", r.feature, 0});
    save_manifest(m, m.source);
    out.inventory = m.source;
  }

  const auto skirts = render_role(config.tuple_skirts, "tup", root, config.image_size, config.seed);
  if (!skirts.empty()) {
    Rng pairing(derive_seed(std::to_string(config.seed), "tuple-pairing"));
    DatasetManifest m{ManifestRole::Tuples, root / kTuplesManifestName, {}};
    for (const auto& r : skirts) {
      const auto& top = tops[pairing.below(tops.size())];
      m.records.push_back({r.id, r.relative_path, "", r.label, top.id, r.feature, 0});
    }
    save_manifest(m, m.source);
    out.tuples = m.source;
  }

  const auto queries = render_role(config.queries, "q", root, config.image_size, config.seed);
  if (!queries.empty()) {
    DatasetManifest m{ManifestRole::Queries, root / kQueriesManifestName, {}};
    for (const auto& r : queries) m.records.push_back({r.id, r.relative_path, "", r.label, "", r.feature, 0});
    save_manifest(m, m.source);
    out.queries = m.source;
  }
  return out;
}

}  // namespace outfit
