#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outfit/pattern.hpp"
#include "outfit/recommenders.hpp"

namespace outfit {

inline constexpr int kMinRating = -1;
inline constexpr int kMaxRating = 2;
inline constexpr std::size_t kRatingLevels = 4;

constexpr bool valid_rating(int v) { return v >= kMinRating && v <= kMaxRating; }
constexpr std::size_t rating_slot(int v) { return static_cast<std::size_t>(v - kMinRating); }

// ---------------------------------------------------------------------------
// Ratings file: one record per line, tab-separated, in this column order:
//
//   query_id  rater_id  model_id  value  elapsed_ms  timestamp  flags  item_values
//
// model_id is DFR or SFR, value is in {-1,0,1,2}, elapsed_ms a non-negative
// integer, timestamp free text (the service writes ISO-8601 UTC). flags and
// item_values are optional; "-" or absence means empty. item_values is a
// comma-separated list of per-item ratings. Blank lines and lines starting
// with '#' are ignored.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kElapsedOutOfRangeFlag = "elapsed_out_of_range";

struct RatingRecord {
  std::string query_id;
  std::string rater_id;
  ModelId model = ModelId::DFR;
  int value = 0;
  std::int64_t elapsed_ms = 0;
  std::string timestamp;
  std::string flags;
  std::vector<int> item_values;

  bool timing_flagged() const { return flags.find(kElapsedOutOfRangeFlag) != std::string::npos; }
};

std::string format_rating(const RatingRecord& record);
/// Throws ParseError (with the line number when known) or ValueOutOfRange.
RatingRecord parse_rating(std::string_view line, std::size_t line_no = 0);
std::vector<RatingRecord> read_ratings(std::istream& in);
std::vector<RatingRecord> read_ratings_file(const std::string& path);
inline constexpr std::string_view kRatingsHeader =
    "#query_id\trater_id\tmodel_id\tvalue\telapsed_ms\ttimestamp\tflags\titem_values";

/// One rater's ratings of both models for one query.
struct RatingVector {
  std::string query_id;
  std::string rater_id;
  std::array<int, 2> values{};                ///< indexed by ModelId
  std::array<std::int64_t, 2> elapsed_ms{};
  std::array<bool, 2> timing_valid{true, true};
  std::string submitted_at;                   ///< latest of the two record timestamps
};

struct VectorAssembly {
  std::vector<RatingVector> vectors;  ///< sorted by (query_id, rater_id)
  std::size_t incomplete = 0;         ///< (query, rater) pairs missing one model
};

/// Pairs DFR and SFR records per (query, rater). Throws DuplicateRating when a
/// (query, rater, model) triple repeats.
VectorAssembly assemble_vectors(std::span<const RatingRecord> records);

struct RaterGamma {
  std::string rater_id;
  double gamma = 0.0;
};

/// gamma_i = sum over every rater j of the same query of |v_i - v_j|_1.
/// Throws EmptyInput or MixedQueryIds.
std::vector<RaterGamma> disagreement(std::span<const RatingVector> ratings_for_query);

/// Median, averaging the two middle values for even counts. Throws EmptyInput.
double agreement_threshold(std::span<const double> gammas);

struct DisagreementRecord {
  std::string query_id;
  std::string rater_id;
  double gamma = 0.0;
  bool retained = false;  ///< gamma < A_T
};

/// Retained / total. Throws EmptyInput.
double query_confidence(std::span<const DisagreementRecord> records);

using QueryClassMap = std::map<std::string, PatternClass, std::less<>>;
using RatingCounts = std::array<std::size_t, kRatingLevels>;  ///< counts for -1, 0, 1, 2
using TimeMedians = std::array<std::optional<double>, kRatingLevels>;

struct QueryStats {
  std::string query_id;
  std::optional<PatternClass> pattern_class;
  std::size_t raters = 0;
  std::size_t retained = 0;
  double confidence = 0.0;
};

/// The full filter-and-weight pipeline over an immutable set of rating vectors.
class RatingAnalysis {
 public:
  explicit RatingAnalysis(std::vector<RatingVector> vectors, QueryClassMap classes = {});

  double agreement_threshold() const { return threshold_; }
  const std::vector<RatingVector>& vectors() const { return vectors_; }
  const std::vector<DisagreementRecord>& records() const { return records_; }
  const std::vector<QueryStats>& queries() const { return queries_; }
  /// No rater retained on any query.
  bool degenerate() const { return retained_total_ == 0; }
  std::size_t retained_total() const { return retained_total_; }

  /// R_m = sum_q C_q * mean of retained ratings for m on q.
  double model_rating(ModelId model) const;
  double model_rating(std::string_view model) const;

  RatingCounts rating_distribution(ModelId model, PatternClass cls) const;
  /// Median elapsed_ms per rating value; empty groups are nullopt.
  TimeMedians time_stats(ModelId model, PatternClass cls) const;
  /// Median elapsed_ms over all retained ratings of `model` on `cls` queries.
  std::optional<double> median_elapsed(ModelId model, PatternClass cls) const;
  /// Valid elapsed_ms of retained ratings, optionally restricted to one value.
  std::vector<std::int64_t> elapsed_samples(ModelId model, PatternClass cls,
                                            std::optional<int> value = std::nullopt) const;

 private:
  std::optional<PatternClass> class_of(const std::string& query_id) const;

  std::vector<RatingVector> vectors_;
  QueryClassMap classes_;
  std::vector<DisagreementRecord> records_;
  std::vector<QueryStats> queries_;
  std::vector<std::size_t> query_of_vector_;
  double threshold_ = 0.0;
  std::size_t retained_total_ = 0;
};

struct AggregateReport {
  struct RaterRow {
    std::string query_id;
    std::string rater_id;
    double gamma = 0.0;
    double gamma_normalized = 0.0;  ///< gamma / (2 * raters on the query * 3)
    bool retained = false;
  };
  struct Distribution {
    ModelId model;
    PatternClass pattern_class;
    RatingCounts counts{};
  };
  struct Timing {
    ModelId model;
    PatternClass pattern_class;
    std::optional<int> value;  ///< nullopt: all retained ratings
    double median_ms = 0.0;
    std::size_t samples = 0;
  };

  double agreement_threshold = 0.0;
  std::size_t vectors = 0;
  std::size_t retained = 0;
  std::size_t incomplete_vectors = 0;
  std::array<double, 2> model_ratings{};
  std::vector<QueryStats> queries;
  std::vector<RaterRow> raters;
  std::vector<Distribution> distributions;
  std::vector<Timing> timing;
  std::vector<std::string> diagnostics;
};

/// Throws NoRatings when `records` is empty. Records that form no complete
/// vector give an all-zero report with a diagnostic.
AggregateReport aggregate(std::span<const RatingRecord> records, const QueryClassMap& classes = {});

/// Structured document (JSON). Deterministic: equal reports give equal bytes.
std::string to_json(const AggregateReport& report);
/// Human-readable summary.
std::string render_text(const AggregateReport& report);
/// Flat tab-separated tables for plotting, one "## name" section per table.
std::string render_tables(const AggregateReport& report);

}  // namespace outfit
