#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "outfit/aggregation.hpp"
#include "outfit/catalog.hpp"
#include "outfit/tuple_index.hpp"

namespace outfit {

// ---------------------------------------------------------------------------
// Manifest files
//
// Line-oriented, tab-separated. The first non-blank line declares the role:
//
//   # outfit-manifest role=<tuples|inventory|queries>
//
// Every other line starting with '#' is a comment. Records use a fixed field
// order per role:
//
//   inventory, queries:  id  path  label  [feature]
//   tuples:              id  path  label  top_item_id  [feature]
//
// path is relative to the manifest's directory (or absolute). label is one of
// the eight pattern labels or "-". feature is the 40-value comma-separated
// histogram text; "-" or absence means "extract from the image on ingest".
// ---------------------------------------------------------------------------

enum class ManifestRole { Tuples, Inventory, Queries };

std::string_view to_string(ManifestRole role);
ManifestRole parse_manifest_role(std::string_view text);

struct ManifestRecord {
  std::string id;
  std::string path;           ///< as written in the file
  std::string resolved_path;  ///< absolute or manifest-relative, ready to open
  std::optional<PatternLabel> label;
  std::string top_item_id;    ///< tuples only
  std::optional<ColorHistogram> feature;
  std::size_t line = 0;
};

struct DatasetManifest {
  ManifestRole role = ManifestRole::Inventory;
  std::filesystem::path source;
  std::vector<ManifestRecord> records;
};

/// Parses and validates a manifest. Throws ParseError, RoleMismatch,
/// DuplicateId or MissingImage, each naming the offending record.
DatasetManifest load_manifest(const std::filesystem::path& path, ManifestRole role);
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
std::string format_manifest(const DatasetManifest& manifest);

/// Every tuple's top_item_id must name an inventory record. Throws DanglingReference.
void check_references(const DatasetManifest& tuples, const DatasetManifest& inventory);

/// Features come from the manifest when present, else from the image.
std::vector<InventoryItem> ingest_inventory(const DatasetManifest& manifest,
                                            double solidness_threshold = kDefaultSolidnessThreshold);
std::vector<OutfitTuple> ingest_tuples(const DatasetManifest& manifest);
std::vector<Query> ingest_queries(const DatasetManifest& manifest);

/// Pattern class per query id, for queries that carry a label.
QueryClassMap query_classes(std::span<const Query> queries);

struct FeatureMismatch {
  std::string id;
  std::string detail;
};

/// Re-extracts every record's feature from its image and compares it bit for
/// bit with the stored one. Records without a stored feature are skipped.
std::vector<FeatureMismatch> verify_features(const DatasetManifest& manifest);

inline constexpr std::string_view kTuplesManifestName = "tuples.manifest";
inline constexpr std::string_view kInventoryManifestName = "inventory.manifest";
inline constexpr std::string_view kQueriesManifestName = "queries.manifest";

/// The three dataset roles loaded together, with the index built.
struct Corpus {
  DatasetManifest tuples_manifest;
  DatasetManifest inventory_manifest;
  DatasetManifest queries_manifest;
  std::vector<InventoryItem> inventory;
  std::vector<Query> queries;
  TupleIndex index;
};

/// Loads tuples/inventory/queries manifests from `dir` (queries may be overridden).
Corpus load_corpus(const std::filesystem::path& dir,
                   double solidness_threshold = kDefaultSolidnessThreshold,
                   const std::optional<std::filesystem::path>& queries_manifest = std::nullopt);

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

using LabelCounts = std::map<PatternLabel, std::size_t>;

struct GeneratorConfig {
  LabelCounts inventory;     ///< tops
  LabelCounts tuple_skirts;  ///< skirts of co-occurrence tuples, each paired with a random top
  LabelCounts queries;       ///< query skirts
  int image_size = 48;
  std::uint64_t seed = 1;
};

/// Parses "Solids=10,Polka=5". Throws InvalidConfig.
LabelCounts parse_label_counts(std::string_view text);

struct GeneratedDataset {
  std::filesystem::path root;
  std::optional<std::filesystem::path> tuples;
  std::optional<std::filesystem::path> inventory;
  std::optional<std::filesystem::path> queries;
};

/// Renders swatches under root/images/<role>/ and writes one manifest per
/// non-empty role (features included). Deterministic per seed.
/// Throws InvalidConfig.
GeneratedDataset generate_synthetic(const GeneratorConfig& config, const std::filesystem::path& root);

/// One procedurally drawn swatch for `label`, deterministic in `seed`.
Image render_swatch(PatternLabel label, int size, std::uint64_t seed);

}  // namespace outfit
