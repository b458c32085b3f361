#include <exception>

#include "outfit/dataset.hpp"
#include "outfit/error.hpp"

namespace fs = std::filesystem;

namespace outfit {
namespace {

/// Stored features where present; the rest are decoded and extracted in parallel.
std::vector<ColorHistogram> features_for(const DatasetManifest& m) {
  const auto n = static_cast<std::ptrdiff_t>(m.records.size());
  std::vector<ColorHistogram> out(m.records.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& rec = m.records[i];
    try {
      out[i] = rec.feature ? *rec.feature : extract_histogram(load_image(rec.resolved_path));
    } catch (...) {
#pragma omp critical(outfit_ingest_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void expect_role(const DatasetManifest& m, ManifestRole role) {
  if (m.role != role)
    throw Error(ErrorCode::RoleMismatch, m.source.string() + ": manifest role is " +
                                             std::string(to_string(m.role)) + ", expected " +
                                             std::string(to_string(role)));
}

}  // namespace

std::vector<InventoryItem> ingest_inventory(const DatasetManifest& m, double solidness_threshold) {
  expect_role(m, ManifestRole::Inventory);
  const auto features = features_for(m);
  std::vector<InventoryItem> items;
  items.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& r = m.records[i];
    items.push_back(make_inventory_item(r.id, r.resolved_path, features[i], r.label, solidness_threshold));
  }
  return items;
}

std::vector<OutfitTuple> ingest_tuples(const DatasetManifest& m) {
  expect_role(m, ManifestRole::Tuples);
  const auto features = features_for(m);
  std::vector<OutfitTuple> tuples;
  tuples.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    tuples.push_back({m.records[i].id, features[i], m.records[i].top_item_id});
  return tuples;
}

std::vector<Query> ingest_queries(const DatasetManifest& m) {
  expect_role(m, ManifestRole::Queries);
  const auto features = features_for(m);
  std::vector<Query> queries;
  queries.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& r = m.records[i];
    queries.push_back({r.id, r.resolved_path, features[i], r.label});
  }
  return queries;
}

QueryClassMap query_classes(std::span<const Query> queries) {
  QueryClassMap out;
  for (const auto& q : queries)
    if (q.pattern_label) out[q.query_id] = classify_pattern(*q.pattern_label);
  return out;
}

std::vector<FeatureMismatch> verify_features(const DatasetManifest& m) {
  std::vector<FeatureMismatch> out;
  for (const auto& r : m.records) {
    if (!r.feature) continue;
    const auto fresh = extract_histogram(load_image(r.resolved_path));
    if (fresh == *r.feature) continue;
    std::size_t bin = 0;
    while (bin < kHistogramSize && fresh.bins[bin] == r.feature->bins[bin]) ++bin;
    out.push_back({r.id, "stored feature differs from re-extraction at bin " + std::to_string(bin)});
  }
  return out;
}

Corpus load_corpus(const fs::path& dir, double solidness_threshold,
                   const std::optional<fs::path>& queries_manifest) {
  Corpus c;
  c.inventory_manifest = load_manifest(dir / kInventoryManifestName, ManifestRole::Inventory);
  c.tuples_manifest = load_manifest(dir / kTuplesManifestName, ManifestRole::Tuples);
  c.queries_manifest =
      load_manifest(queries_manifest.value_or(dir / kQueriesManifestName), ManifestRole::Queries);
  check_references(c.tuples_manifest, c.inventory_manifest);
  c.inventory = ingest_inventory(c.inventory_manifest, solidness_threshold);
  c.queries = ingest_queries(c.queries_manifest);
  c.index = TupleIndex::build(ingest_tuples(c.tuples_manifest));
  return c;
}

}  // namespace outfit
