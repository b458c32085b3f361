#include <algorithm>
#include <cstdlib>
#include <map>

#include "outfit/aggregation.hpp"
#include "outfit/error.hpp"

namespace outfit {
namespace {

std::size_t model_slot(ModelId m) { return m == ModelId::DFR ? 0 : 1; }

int l1(const RatingVector& a, const RatingVector& b) {
  return std::abs(a.values[0] - b.values[0]) + std::abs(a.values[1] - b.values[1]);
}

template <typename T>
double median_of(std::vector<T> xs) {
  const std::size_t n = xs.size();
  const std::size_t mid = n / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = static_cast<double>(xs[mid]);
  if (n % 2 == 1) return upper;
  const double lower =
      static_cast<double>(*std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid)));
  return (lower + upper) / 2.0;
}

}  // namespace

VectorAssembly assemble_vectors(std::span<const RatingRecord> records) {
  struct Partial {
    RatingVector v;
    std::array<bool, 2> seen{};
  };
  std::map<std::pair<std::string, std::string>, Partial> groups;
  for (const auto& r : records) {
    if (!valid_rating(r.value))
      throw Error(ErrorCode::ValueOutOfRange, "rating value out of range for query " + r.query_id);
    auto& p = groups[{r.query_id, r.rater_id}];
    const std::size_t slot = model_slot(r.model);
    if (p.seen[slot])
      throw Error(ErrorCode::DuplicateRating, "duplicate rating for query " + r.query_id + ", rater " +
                                                  r.rater_id + ", model " + std::string(to_string(r.model)));
    p.seen[slot] = true;
    p.v.query_id = r.query_id;
    p.v.rater_id = r.rater_id;
    p.v.values[slot] = r.value;
    p.v.elapsed_ms[slot] = r.elapsed_ms;
    p.v.timing_valid[slot] = !r.timing_flagged();
    p.v.submitted_at = std::max(p.v.submitted_at, r.timestamp);
  }
  VectorAssembly out;
  for (auto& [key, p] : groups) {
    if (p.seen[0] && p.seen[1])
      out.vectors.push_back(std::move(p.v));
    else
      ++out.incomplete;
  }
  return out;
}

std::vector<RaterGamma> disagreement(std::span<const RatingVector> ratings_for_query) {
  if (ratings_for_query.empty()) throw Error(ErrorCode::EmptyInput, "no ratings for query");
  const auto& qid = ratings_for_query.front().query_id;
  for (const auto& v : ratings_for_query)
    if (v.query_id != qid)
      throw Error(ErrorCode::MixedQueryIds, "ratings mix queries " + qid + " and " + v.query_id);

  std::vector<RaterGamma> out;
  out.reserve(ratings_for_query.size());
  for (const auto& vi : ratings_for_query) {
    int gamma = 0;
    for (const auto& vj : ratings_for_query) gamma += l1(vi, vj);
    out.push_back({vi.rater_id, static_cast<double>(gamma)});
  }
  return out;
}

double agreement_threshold(std::span<const double> gammas) {
  if (gammas.empty()) throw Error(ErrorCode::EmptyInput, "no disagreement scores");
  return median_of(std::vector<double>(gammas.begin(), gammas.end()));
}

double query_confidence(std::span<const DisagreementRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no raters for query");
  const auto kept = std::count_if(records.begin(), records.end(),
                                  [](const DisagreementRecord& r) { return r.retained; });
  return static_cast<double>(kept) / static_cast<double>(records.size());
}

RatingAnalysis::RatingAnalysis(std::vector<RatingVector> vectors, QueryClassMap classes)
    : vectors_(std::move(vectors)), classes_(std::move(classes)) {
  if (vectors_.empty()) throw Error(ErrorCode::EmptyInput, "no rating vectors");
  std::stable_sort(vectors_.begin(), vectors_.end(), [](const RatingVector& a, const RatingVector& b) {
    return a.query_id < b.query_id;
  });

  // Group boundaries: vectors_[starts[g] .. starts[g+1]) share a query.
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 1; i < vectors_.size(); ++i)
    if (vectors_[i].query_id != vectors_[i - 1].query_id) starts.push_back(i);
  starts.push_back(vectors_.size());
  const auto groups = static_cast<std::ptrdiff_t>(starts.size() - 1);

  records_.resize(vectors_.size());
  query_of_vector_.resize(vectors_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    const std::size_t lo = starts[g], hi = starts[g + 1];
    const auto gammas = disagreement(std::span(vectors_).subspan(lo, hi - lo));
    for (std::size_t i = lo; i < hi; ++i) {
      records_[i] = {vectors_[i].query_id, vectors_[i].rater_id, gammas[i - lo].gamma, false};
      query_of_vector_[i] = static_cast<std::size_t>(g);
    }
  }

  std::vector<double> all;
  all.reserve(records_.size());
  for (const auto& r : records_) all.push_back(r.gamma);
  threshold_ = outfit::agreement_threshold(all);

  for (auto& r : records_) {
    r.retained = r.gamma < threshold_;
    retained_total_ += r.retained ? 1 : 0;
  }
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    const std::size_t lo = starts[g], hi = starts[g + 1];
    const auto span = std::span(records_).subspan(lo, hi - lo);
    QueryStats q;
    q.query_id = vectors_[lo].query_id;
    q.pattern_class = class_of(q.query_id);
    q.raters = hi - lo;
    q.retained = static_cast<std::size_t>(
        std::count_if(span.begin(), span.end(), [](const auto& r) { return r.retained; }));
    q.confidence = query_confidence(span);
    queries_.push_back(std::move(q));
  }
}

std::optional<PatternClass> RatingAnalysis::class_of(const std::string& query_id) const {
  const auto it = classes_.find(query_id);
  if (it == classes_.end()) return std::nullopt;
  return it->second;
}

double RatingAnalysis::model_rating(ModelId model) const {
  const std::size_t slot = model_slot(model);
  std::vector<double> sums(queries_.size(), 0.0);
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    if (records_[i].retained) sums[query_of_vector_[i]] += vectors_[i].values[slot];
  double total = 0.0;
  for (std::size_t q = 0; q < queries_.size(); ++q) {
    if (queries_[q].retained == 0) continue;
    total += queries_[q].confidence * (sums[q] / static_cast<double>(queries_[q].retained));
  }
  return total;
}

double RatingAnalysis::model_rating(std::string_view model) const {
  return model_rating(parse_model(model));
}

RatingCounts RatingAnalysis::rating_distribution(ModelId model, PatternClass cls) const {
  RatingCounts counts{};
  const std::size_t slot = model_slot(model);
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (!records_[i].retained) continue;
    if (queries_[query_of_vector_[i]].pattern_class != cls) continue;
    ++counts[rating_slot(vectors_[i].values[slot])];
  }
  return counts;
}

std::vector<std::int64_t> RatingAnalysis::elapsed_samples(ModelId model, PatternClass cls,
                                                          std::optional<int> value) const {
  std::vector<std::int64_t> out;
  const std::size_t slot = model_slot(model);
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const auto& v = vectors_[i];
    if (!records_[i].retained || !v.timing_valid[slot]) continue;
    if (queries_[query_of_vector_[i]].pattern_class != cls) continue;
    if (value && v.values[slot] != *value) continue;
    out.push_back(v.elapsed_ms[slot]);
  }
  return out;
}

TimeMedians RatingAnalysis::time_stats(ModelId model, PatternClass cls) const {
  TimeMedians out;
  for (int value = kMinRating; value <= kMaxRating; ++value) {
    auto samples = elapsed_samples(model, cls, value);
    if (!samples.empty()) out[rating_slot(value)] = median_of(std::move(samples));
  }
  return out;
}

std::optional<double> RatingAnalysis::median_elapsed(ModelId model, PatternClass cls) const {
  auto samples = elapsed_samples(model, cls);
  if (samples.empty()) return std::nullopt;
  return median_of(std::move(samples));
}

}  // namespace outfit
