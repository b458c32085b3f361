#include "outfit/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "outfit/error.hpp"
#include "outfit/random.hpp"

namespace fs = std::filesystem;

namespace outfit::service {
namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  return buf;
}

bool has_separator(std::string_view s) {
  return s.find_first_of("\t\n\r") != std::string_view::npos;
}

std::string encode_queue(const std::vector<WorkUnit>& queue) {
  std::string out;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (i) out += ',';
    out += queue[i].query_id;
    out += ':';
    out += to_string(queue[i].model);
  }
  return out;
}

std::vector<WorkUnit> decode_queue(std::string_view text) {
  std::vector<WorkUnit> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::ParseError, "bad work unit: " + std::string(item));
    out.push_back({std::string(item.substr(0, colon)), parse_model(item.substr(colon + 1))});
  }
  return out;
}

}  // namespace

/// Single-writer append-only text log; every append is fsync'ed.
class RatingService::AppendLog {
 public:
  explicit AppendLog(fs::path path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::IoError, "cannot open " + path_.string() + ": " + std::strerror(errno));
  }
  ~AppendLog() {
    if (fd_ >= 0) ::close(fd_);
  }
  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(std::string line) {
    line += '\n';
    std::lock_guard lock(mutex_);
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
      const ssize_t n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::IoError, "append to " + path_.string() + " failed: " + std::strerror(errno));
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0)
      throw Error(ErrorCode::IoError, "fsync of " + path_.string() + " failed: " + std::strerror(errno));
  }

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  int fd_ = -1;
  std::mutex mutex_;
};

std::vector<WorkUnit> make_work_queue(std::string_view session_id, std::span<const Query> queries,
                                      std::span<const ModelId> models) {
  std::vector<WorkUnit> queue;
  queue.reserve(queries.size() * models.size());
  for (const auto& q : queries)
    for (ModelId m : models) queue.push_back({q.query_id, m});
  Rng rng(fnv1a64(session_id));
  for (std::size_t i = queue.size(); i > 1; --i) std::swap(queue[i - 1], queue[rng.below(i)]);
  return queue;
}

std::string rater_key(std::string_view rater_id, std::string_view session_id) {
  return std::string(rater_id) + "@" + std::string(session_id);
}

int derive_list_rating(std::span<const int> item_values) {
  if (item_values.empty()) throw Error(ErrorCode::InvalidArgument, "no item ratings");
  double sum = 0.0;
  for (int v : item_values) sum += v;
  return static_cast<int>(std::lround(sum / static_cast<double>(item_values.size())));
}

RatingService::RatingService(Corpus corpus, Settings settings, fs::path data_dir, std::vector<ModelId> models)
    : corpus_(std::move(corpus)), settings_(settings), data_dir_(std::move(data_dir)), models_(std::move(models)) {
  validate(settings_);
  if (models_.empty()) throw Error(ErrorCode::InvalidConfig, "no models to rate");
  image_root_ = corpus_.inventory_manifest.source.parent_path();
  if (image_root_.empty()) image_root_ = fs::current_path();
  image_root_ = fs::absolute(image_root_).lexically_normal();
  query_sets_.emplace(std::string(kDefaultQuerySet), corpus_.queries);

  fs::create_directories(data_dir_);
  replay();
  session_log_ = std::make_unique<AppendLog>(data_dir_ / "sessions.log");
  rating_log_ = std::make_unique<AppendLog>(data_dir_ / "ratings.tsv");
}

RatingService::~RatingService() = default;

void RatingService::replay() {
  {
    std::ifstream in(data_dir_ / "sessions.log");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream cols(line);
      auto s = std::make_unique<Slot>();
      std::string queue;
      std::getline(cols, s->session.session_id, '\t');
      std::getline(cols, s->session.rater_id, '\t');
      std::getline(cols, s->session.query_set, '\t');
      std::getline(cols, queue);
      s->session.queue = decode_queue(queue);
      ++session_counter_;
      sessions_.emplace(s->session.session_id, std::move(s));
    }
  }
  const fs::path ratings = data_dir_ / "ratings.tsv";
  if (!fs::exists(ratings)) return;
  ratings_ = read_ratings_file(ratings.string());
  for (const auto& r : ratings_) {
    const auto at = r.rater_id.rfind('@');
    if (at == std::string::npos) continue;
    const auto it = sessions_.find(std::string_view(r.rater_id).substr(at + 1));
    if (it == sessions_.end()) continue;
    Session& s = it->second->session;
    if (!s.complete() && s.queue[s.cursor] == WorkUnit{r.query_id, r.model}) ++s.cursor;
  }
}

const std::vector<Query>& RatingService::query_set(std::string_view name) const {
  const auto it = query_sets_.find(name);
  if (it == query_sets_.end()) throw Error(ErrorCode::UnknownQuerySet, "unknown query set: " + std::string(name));
  return it->second;
}

void RatingService::add_query_set(std::string name, std::vector<Query> queries) {
  std::unique_lock lock(sessions_mutex_);
  query_sets_[std::move(name)] = std::move(queries);
}

const Query& RatingService::find_query(const std::string& set, const std::string& query_id) const {
  for (const auto& q : query_set(set))
    if (q.query_id == query_id) return q;
  throw Error(ErrorCode::UnknownQuerySet, "query " + query_id + " not in set " + set);
}

Session RatingService::create_session(const std::string& rater_id, std::string_view set_name) {
  if (rater_id.empty() || has_separator(rater_id) || rater_id.find('@') != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "rater_id must be non-empty without tabs, newlines or '@'");

  std::unique_lock lock(sessions_mutex_);
  const auto& queries = query_set(set_name);
  auto slot = std::make_unique<Slot>();
  Session& s = slot->session;
  std::random_device entropy;
  char id[48];
  std::snprintf(id, sizeof id, "s%06llu-%08x", static_cast<unsigned long long>(++session_counter_),
                static_cast<unsigned>(entropy()));
  s.session_id = id;
  s.rater_id = rater_id;
  s.query_set = std::string(set_name);
  s.queue = make_work_queue(s.session_id, queries, models_);

  session_log_->append(s.session_id + "\t" + s.rater_id + "\t" + s.query_set + "\t" + encode_queue(s.queue));
  Session copy = s;
  sessions_.emplace(s.session_id, std::move(slot));
  return copy;
}

RatingService::Slot& RatingService::slot(std::string_view session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session: " + std::string(session_id));
  return *it->second;
}

Session RatingService::session(std::string_view session_id) const {
  Slot& s = slot(session_id);
  std::lock_guard lock(s.mutex);
  return s.session;
}

RecommendationList RatingService::build_list(const Session& s, const WorkUnit& unit, const Query& q) const {
  if (unit.model == ModelId::DFR) return dfr_recommend(corpus_.index, q, settings_.list_size);
  return sfr_recommend(corpus_.inventory, q, settings_.list_size, derive_seed(s.session_id, q.query_id),
                       settings_.sfr_options());
}

UnitView RatingService::next_unit(std::string_view session_id) const {
  Slot& sl = slot(session_id);
  std::lock_guard lock(sl.mutex);
  const Session& s = sl.session;
  if (s.complete()) throw Error(ErrorCode::SessionComplete, "session " + s.session_id + " is complete");
  const WorkUnit& unit = s.queue[s.cursor];
  const Query& q = find_query(s.query_set, unit.query_id);
  return {s.session_id, s.cursor + 1, s.queue.size(), &q, build_list(s, unit, q)};
}

Acknowledgment RatingService::submit_rating(const RatingSubmission& sub) {
  Slot& sl = slot(sub.session_id);
  std::lock_guard lock(sl.mutex);
  Session& s = sl.session;
  if (s.complete()) throw Error(ErrorCode::SessionComplete, "session " + s.session_id + " is complete");
  const WorkUnit& unit = s.queue[s.cursor];
  if (unit.query_id != sub.query_id || unit.model != sub.model)
    throw Error(ErrorCode::OutOfOrderSubmission,
                "expected a rating for " + unit.query_id + "/" + std::string(to_string(unit.model)) + ", got " +
                    sub.query_id + "/" + std::string(to_string(sub.model)));
  for (int v : sub.values)
    if (!valid_rating(v))
      throw Error(ErrorCode::ValueOutOfRange, "rating " + std::to_string(v) + " outside {-1,0,1,2}");
  if (sub.elapsed_ms < 0) throw Error(ErrorCode::InvalidArgument, "elapsed_ms must be non-negative");

  RatingRecord rec;
  rec.query_id = sub.query_id;
  rec.rater_id = rater_key(s.rater_id, s.session_id);
  rec.model = sub.model;
  rec.elapsed_ms = sub.elapsed_ms;
  rec.timestamp = utc_now();
  if (settings_.rating_protocol == RatingProtocol::PerItem) {
    const auto expected = build_list(s, unit, find_query(s.query_set, unit.query_id)).entries.size();
    if (sub.values.size() != expected)
      throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(expected) + " item ratings, got " +
                                                  std::to_string(sub.values.size()));
    rec.value = derive_list_rating(sub.values);
    rec.item_values = sub.values;
  } else {
    if (sub.values.size() != 1)
      throw Error(ErrorCode::InvalidArgument, "per-list protocol takes exactly one rating");
    rec.value = sub.values.front();
  }
  if (sub.elapsed_ms < settings_.elapsed_min_ms || sub.elapsed_ms > settings_.elapsed_max_ms)
    rec.flags = std::string(kElapsedOutOfRangeFlag);

  {
    // Durable before visible, and visible before acknowledged.
    std::lock_guard rlock(ratings_mutex_);
    rating_log_->append(format_rating(rec));
    ratings_.push_back(rec);
  }
  ++s.cursor;
  return {s.cursor, s.complete(), std::move(rec)};
}

QueryClassMap RatingService::query_classes() const {
  std::shared_lock lock(sessions_mutex_);
  QueryClassMap out;
  for (const auto& [name, queries] : query_sets_) {
    const auto classes = outfit::query_classes(queries);
    out.insert(classes.begin(), classes.end());
  }
  return out;
}

AggregateReport RatingService::report() const {
  std::vector<RatingRecord> snapshot;
  {
    std::lock_guard lock(ratings_mutex_);
    snapshot = ratings_;
  }
  return aggregate(snapshot, query_classes());
}

std::string RatingService::export_ratings() const {
  std::string out(kRatingsHeader);
  out += '\n';
  std::lock_guard lock(ratings_mutex_);
  for (const auto& r : ratings_) {
    out += format_rating(r);
    out += '\n';
  }
  return out;
}

std::string RatingService::image_url(const std::string& resolved_path) const {
  const fs::path abs = fs::absolute(resolved_path).lexically_normal();
  return "/images/" + abs.lexically_relative(image_root_).generic_string();
}

}  // namespace outfit::service
