#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "outfit/aggregation.hpp"
#include "outfit/error.hpp"

namespace outfit {
namespace {

constexpr double kRatingRange = kMaxRating - kMinRating;
constexpr std::array<PatternClass, 2> kClasses = {PatternClass::Simple, PatternClass::Complex};

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

AggregateReport aggregate(std::span<const RatingRecord> records, const QueryClassMap& classes) {
  if (records.empty()) throw Error(ErrorCode::NoRatings, "no ratings recorded");
  auto assembly = assemble_vectors(records);
  if (assembly.vectors.empty()) {
    AggregateReport rep;
    rep.incomplete_vectors = assembly.incomplete;
    for (ModelId m : kAllModels)
      for (PatternClass c : kClasses) rep.distributions.push_back({m, c, {}});
    rep.diagnostics.push_back("no rater has rated both models of any query; model ratings are reported as 0");
    return rep;
  }

  std::size_t flagged = 0;
  for (const auto& r : records) flagged += r.timing_flagged() ? 1 : 0;

  const RatingAnalysis analysis(std::move(assembly.vectors), classes);
  AggregateReport rep;
  rep.agreement_threshold = analysis.agreement_threshold();
  rep.vectors = analysis.vectors().size();
  rep.retained = analysis.retained_total();
  rep.incomplete_vectors = assembly.incomplete;
  for (ModelId m : kAllModels)
    rep.model_ratings[m == ModelId::DFR ? 0 : 1] = analysis.model_rating(m);
  rep.queries = analysis.queries();

  std::map<std::string, std::size_t, std::less<>> raters_per_query;
  for (const auto& q : rep.queries) raters_per_query[q.query_id] = q.raters;
  for (const auto& rec : analysis.records()) {
    const auto n = static_cast<double>(raters_per_query[rec.query_id]);
    rep.raters.push_back({rec.query_id, rec.rater_id, rec.gamma,
                          rec.gamma / (2.0 * n * kRatingRange), rec.retained});
  }

  for (ModelId m : kAllModels) {
    for (PatternClass c : kClasses) {
      rep.distributions.push_back({m, c, analysis.rating_distribution(m, c)});
      const auto all = analysis.elapsed_samples(m, c);
      if (const auto med = analysis.median_elapsed(m, c))
        rep.timing.push_back({m, c, std::nullopt, *med, all.size()});
      const auto medians = analysis.time_stats(m, c);
      for (int v = kMinRating; v <= kMaxRating; ++v) {
        if (!medians[rating_slot(v)]) continue;
        rep.timing.push_back({m, c, v, *medians[rating_slot(v)], analysis.elapsed_samples(m, c, v).size()});
      }
    }
  }

  if (analysis.degenerate()) {
    rep.diagnostics.push_back(
        "no rater retained on any query: every disagreement score is >= the agreement threshold " +
        fixed(rep.agreement_threshold) + "; model ratings are reported as 0");
  }
  if (assembly.incomplete > 0)
    rep.diagnostics.push_back(std::to_string(assembly.incomplete) +
                              " (query, rater) pair(s) rated only one model and were ignored");
  if (flagged > 0)
    rep.diagnostics.push_back(std::to_string(flagged) +
                              " rating(s) carry out-of-range elapsed_ms and are excluded from timing");
  return rep;
}

std::string to_json(const AggregateReport& rep) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["agreement_threshold"] = rep.agreement_threshold;
  doc["vectors"] = rep.vectors;
  doc["retained"] = rep.retained;
  doc["incomplete_vectors"] = rep.incomplete_vectors;
  doc["model_ratings"] = {{"DFR", rep.model_ratings[0]}, {"SFR", rep.model_ratings[1]}};

  auto& queries = doc["queries"] = ordered_json::array();
  for (const auto& q : rep.queries) {
    queries.push_back({{"query_id", q.query_id},
                       {"class", q.pattern_class ? ordered_json(to_string(*q.pattern_class)) : ordered_json()},
                       {"raters", q.raters},
                       {"retained", q.retained},
                       {"confidence", q.confidence}});
  }
  auto& raters = doc["raters"] = ordered_json::array();
  for (const auto& r : rep.raters) {
    raters.push_back({{"query_id", r.query_id},
                      {"rater_id", r.rater_id},
                      {"gamma", r.gamma},
                      {"gamma_normalized", r.gamma_normalized},
                      {"retained", r.retained}});
  }
  auto& dists = doc["distributions"] = ordered_json::array();
  for (const auto& d : rep.distributions) {
    dists.push_back({{"model", to_string(d.model)},
                     {"class", to_string(d.pattern_class)},
                     {"counts", {{"-1", d.counts[0]}, {"0", d.counts[1]}, {"1", d.counts[2]}, {"2", d.counts[3]}}}});
  }
  auto& timing = doc["timing"] = ordered_json::array();
  for (const auto& t : rep.timing) {
    timing.push_back({{"model", to_string(t.model)},
                      {"class", to_string(t.pattern_class)},
                      {"value", t.value ? ordered_json(*t.value) : ordered_json("all")},
                      {"median_ms", t.median_ms},
                      {"samples", t.samples}});
  }
  doc["diagnostics"] = rep.diagnostics;
  return doc.dump(2) + "\n";
}

std::string render_text(const AggregateReport& rep) {
  std::ostringstream out;
  out << "Rating aggregation report\n";
  out << "  rating vectors:       " << rep.vectors << " (" << rep.retained << " retained, "
      << rep.incomplete_vectors << " incomplete ignored)\n";
  out << "  agreement threshold:  " << fixed(rep.agreement_threshold) << "\n";
  out << "  queries:              " << rep.queries.size() << "\n";
  out << "\nModel ratings\n";
  out << "  DFR  " << fixed(rep.model_ratings[0]) << "\n";
  out << "  SFR  " << fixed(rep.model_ratings[1]) << "\n";
  out << "\nRating distributions (retained ratings; -1 / 0 / 1 / 2)\n";
  for (const auto& d : rep.distributions)
    out << "  " << to_string(d.model) << " " << to_string(d.pattern_class) << ":  " << d.counts[0] << " / "
        << d.counts[1] << " / " << d.counts[2] << " / " << d.counts[3] << "\n";
  out << "\nMedian time to rate (ms)\n";
  for (const auto& t : rep.timing)
    out << "  " << to_string(t.model) << " " << to_string(t.pattern_class) << " value="
        << (t.value ? std::to_string(*t.value) : std::string("all")) << ":  " << fixed(t.median_ms, 1)
        << " (n=" << t.samples << ")\n";
  if (!rep.diagnostics.empty()) {
    out << "\nDiagnostics\n";
    for (const auto& d : rep.diagnostics) out << "  warning: " << d << "\n";
  }
  return out.str();
}

std::string render_tables(const AggregateReport& rep) {
  std::ostringstream out;
  out << "## model_ratings\nmodel\trating\n";
  out << "DFR\t" << fixed(rep.model_ratings[0], 9) << "\nSFR\t" << fixed(rep.model_ratings[1], 9) << "\n\n";
  out << "## queries\nquery_id\tclass\traters\tretained\tconfidence\n";
  for (const auto& q : rep.queries)
    out << q.query_id << "\t" << (q.pattern_class ? to_string(*q.pattern_class) : "-") << "\t" << q.raters
        << "\t" << q.retained << "\t" << fixed(q.confidence) << "\n";
  out << "\n## disagreement\nquery_id\trater_id\tgamma\tgamma_normalized\tretained\n";
  for (const auto& r : rep.raters)
    out << r.query_id << "\t" << r.rater_id << "\t" << fixed(r.gamma, 1) << "\t" << fixed(r.gamma_normalized)
        << "\t" << (r.retained ? 1 : 0) << "\n";
  out << "\n## distributions\nmodel\tclass\tvalue\tcount\n";
  for (const auto& d : rep.distributions)
    for (int v = kMinRating; v <= kMaxRating; ++v)
      out << to_string(d.model) << "\t" << to_string(d.pattern_class) << "\t" << v << "\t"
          << d.counts[rating_slot(v)] << "\n";
  out << "\n## timing\nmodel\tclass\tvalue\tmedian_ms\tsamples\n";
  for (const auto& t : rep.timing)
    out << to_string(t.model) << "\t" << to_string(t.pattern_class) << "\t"
        << (t.value ? std::to_string(*t.value) : std::string("all")) << "\t" << fixed(t.median_ms, 1) << "\t"
        << t.samples << "\n";
  return out.str();
}

}  // namespace outfit
