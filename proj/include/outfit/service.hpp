#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "outfit/aggregation.hpp"
#include "outfit/config.hpp"
#include "outfit/dataset.hpp"
#include "outfit/recommenders.hpp"

namespace outfit::service {

inline constexpr std::string_view kDefaultQuerySet = "default";

struct WorkUnit {
  std::string query_id;
  ModelId model = ModelId::DFR;

  friend bool operator==(const WorkUnit&, const WorkUnit&) = default;
};

struct Session {
  std::string session_id;
  std::string rater_id;
  std::string query_set;
  std::vector<WorkUnit> queue;
  std::size_t cursor = 0;

  bool complete() const { return cursor >= queue.size(); }
};

/// Every query x model once, shuffled with a generator seeded from the session id.
std::vector<WorkUnit> make_work_queue(std::string_view session_id, std::span<const Query> queries,
                                      std::span<const ModelId> models);

struct UnitView {
  std::string session_id;
  std::size_t position = 0;  ///< 1-based
  std::size_t total = 0;
  const Query* query = nullptr;
  RecommendationList list;
};

struct RatingSubmission {
  std::string session_id;
  std::string query_id;
  ModelId model = ModelId::DFR;
  /// One value per recommended item (per-item protocol) or exactly one value
  /// for the whole list (per-list protocol).
  std::vector<int> values;
  std::int64_t elapsed_ms = 0;
  std::string client_timestamp;
};

struct Acknowledgment {
  std::size_t cursor = 0;
  bool complete = false;
  RatingRecord record;  ///< as persisted
};

/// Rater identity written to the ratings log: one (rater, session) pair is
/// one rating slot, so two sessions of the same person never collide.
std::string rater_key(std::string_view rater_id, std::string_view session_id);

/// Mean of per-item ratings rounded half away from zero.
int derive_list_rating(std::span<const int> item_values);

/// Rating sessions over a loaded corpus. Durable state lives in `data_dir`:
///   sessions.log  one line per created session (id, rater, query set, queue)
///   ratings.tsv   append-only ratings in the aggregation ingest schema
/// Both are fsync'ed before a call returns, and replayed on construction.
class RatingService {
 public:
  RatingService(Corpus corpus, Settings settings, std::filesystem::path data_dir,
                std::vector<ModelId> models = {ModelId::DFR, ModelId::SFR});
  ~RatingService();

  RatingService(const RatingService&) = delete;
  RatingService& operator=(const RatingService&) = delete;

  /// Throws InvalidArgument for an empty rater id, UnknownQuerySet.
  Session create_session(const std::string& rater_id, std::string_view query_set = kDefaultQuerySet);
  /// Throws UnknownSession.
  Session session(std::string_view session_id) const;
  /// Idempotent read of the unit at the cursor. Throws UnknownSession, SessionComplete.
  UnitView next_unit(std::string_view session_id) const;
  /// Persists, then advances. Throws UnknownSession, SessionComplete,
  /// OutOfOrderSubmission, ValueOutOfRange, InvalidArgument.
  Acknowledgment submit_rating(const RatingSubmission& submission);

  /// Throws NoRatings.
  AggregateReport report() const;
  /// Ratings log contents with a header line.
  std::string export_ratings() const;

  void add_query_set(std::string name, std::vector<Query> queries);
  const Corpus& corpus() const { return corpus_; }
  const Settings& settings() const { return settings_; }
  QueryClassMap query_classes() const;
  /// URL path under /images/ for a corpus image.
  std::string image_url(const std::string& resolved_path) const;
  const std::filesystem::path& image_root() const { return image_root_; }

 private:
  struct Slot {
    mutable std::mutex mutex;
    Session session;
  };
  class AppendLog;

  const std::vector<Query>& query_set(std::string_view name) const;
  const Query& find_query(const std::string& set, const std::string& query_id) const;
  RecommendationList build_list(const Session& s, const WorkUnit& unit, const Query& q) const;
  Slot& slot(std::string_view session_id) const;
  void replay();

  Corpus corpus_;
  Settings settings_;
  std::filesystem::path data_dir_;
  std::filesystem::path image_root_;
  std::vector<ModelId> models_;
  std::map<std::string, std::vector<Query>, std::less<>> query_sets_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Slot>, std::less<>> sessions_;
  std::uint64_t session_counter_ = 0;

  mutable std::mutex ratings_mutex_;
  std::vector<RatingRecord> ratings_;
  std::unique_ptr<AppendLog> session_log_;
  std::unique_ptr<AppendLog> rating_log_;
};

}  // namespace outfit::service
