#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "outfit/aggregation.hpp"
#include "outfit/error.hpp"
#include "outfit/simulation.hpp"
#include "support.hpp"
#include "world.hpp"

using namespace outfit;
using testkit::make_record;

namespace {

RatingVector vec(std::string q, std::string r, int dfr, int sfr) {
  RatingVector v;
  v.query_id = std::move(q);
  v.rater_id = std::move(r);
  v.values = {dfr, sfr};
  v.elapsed_ms = {1000, 1000};
  return v;
}

std::vector<RatingRecord> records_of(const std::vector<RatingVector>& vs) { return sim::to_records(vs); }

std::vector<double> gammas_of(const std::vector<RaterGamma>& gs) {
  std::vector<double> out;
  for (const auto& g : gs) out.push_back(g.gamma);
  return out;
}

}  // namespace

TEST(Disagreement, IdenticalRatersAgreeCompletely) {
  std::vector<RatingVector> vs;
  for (int i = 0; i < 5; ++i) vs.push_back(vec("q", "r" + std::to_string(i), 2, 2));
  EXPECT_EQ(gammas_of(disagreement(vs)), std::vector<double>(5, 0.0));
}

TEST(Disagreement, HandComputedPairwiseSums) {
  const std::vector<RatingVector> vs = {vec("q", "a", 2, 2), vec("q", "b", 2, 2), vec("q", "c", -1, -1)};
  EXPECT_EQ(gammas_of(disagreement(vs)), (std::vector<double>{6, 6, 12}));
}

TEST(Disagreement, SingleRaterAndErrors) {
  EXPECT_EQ(gammas_of(disagreement(std::vector{vec("q", "a", 1, -1)})), std::vector<double>{0});
  try {
    disagreement(std::vector{vec("q1", "a", 1, 1), vec("q2", "b", 1, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedQueryIds);
  }
  EXPECT_THROW(disagreement(std::vector<RatingVector>{}), Error);
}

TEST(Disagreement, PermutationInvariantAndPairsCountedTwice) {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> val(-1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RatingVector> vs;
    const int n = 1 + static_cast<int>(gen() % 9);
    for (int i = 0; i < n; ++i) vs.push_back(vec("q", "r" + std::to_string(i), val(gen), val(gen)));
    const auto base = disagreement(vs);
    std::map<std::string, double> by_id;
    double total = 0.0;
    for (const auto& g : base) by_id[g.rater_id] = g.gamma, total += g.gamma;
    double pairs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pairs += std::abs(vs[i].values[0] - vs[j].values[0]) + std::abs(vs[i].values[1] - vs[j].values[1]);
    EXPECT_EQ(total, 2.0 * pairs);
    std::shuffle(vs.begin(), vs.end(), gen);
    for (const auto& g : disagreement(vs)) EXPECT_EQ(g.gamma, by_id[g.rater_id]);
  }
}

TEST(AgreementThreshold, MedianConventions) {
  EXPECT_EQ(agreement_threshold(std::vector<double>{0, 0, 4}), 0.0);
  EXPECT_EQ(agreement_threshold(std::vector<double>{0, 2, 4, 10}), 3.0);
  EXPECT_EQ(agreement_threshold(std::vector<double>{10, 4, 0, 2}), 3.0);
  EXPECT_THROW(agreement_threshold(std::vector<double>{}), Error);
}

TEST(AgreementThreshold, MatchesSortOracleOnLargeSamples) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<int> g(0, 48);
  for (std::size_t n : {5000u, 5001u, 1u, 2u}) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = g(gen);
    EXPECT_EQ(agreement_threshold(xs), testkit::median_of(xs));
  }
}

TEST(QueryConfidence, RetainedOverTotal) {
  std::vector<DisagreementRecord> recs(5, {"q", "r", 0.0, true});
  recs[4].retained = false;
  EXPECT_DOUBLE_EQ(query_confidence(recs), 0.8);
  for (auto& r : recs) r.retained = false;
  EXPECT_EQ(query_confidence(recs), 0.0);
  EXPECT_THROW(query_confidence(std::vector<DisagreementRecord>{}), Error);
}

TEST(ModelRating, HandEvaluatedConfiguration) {
  // Literal form: gammas {0,0,0,0,8} against A_T = 4, retained raters all rate 2.
  const std::vector<double> gammas = {0, 0, 0, 0, 8};
  const double a_t = 4.0;
  std::vector<DisagreementRecord> recs;
  for (double g : gammas) recs.push_back({"q", "r", g, g < a_t});
  const double c = query_confidence(recs);
  EXPECT_NEAR(c * 2.0, 1.6, 1e-9);

  // Through the pipeline: four raters at (2,2) and one at (-1,-1) give gammas
  // {6,6,6,6,24}; a second query of four mutually distant raters gives {12 x4}.
  // A_T = median{6,6,6,6,12,12,12,12,24} = 12, so q1 keeps 4 of 5 and q2 none.
  std::vector<RatingVector> vs;
  for (int i = 0; i < 4; ++i) vs.push_back(vec("q1", "r" + std::to_string(i), 2, 2));
  vs.push_back(vec("q1", "spam", -1, -1));
  vs.push_back(vec("q2", "a", 2, 2));
  vs.push_back(vec("q2", "b", -1, -1));
  vs.push_back(vec("q2", "c", 2, -1));
  vs.push_back(vec("q2", "d", -1, 2));
  const RatingAnalysis analysis(vs);
  EXPECT_EQ(analysis.agreement_threshold(), 12.0);
  EXPECT_DOUBLE_EQ(analysis.queries()[0].confidence, 0.8);
  EXPECT_EQ(analysis.queries()[1].retained, 0u);
  EXPECT_NEAR(analysis.model_rating(ModelId::DFR), 1.6, 1e-9);
  EXPECT_NEAR(analysis.model_rating("sfr"), 1.6, 1e-9);
}

TEST(ModelRating, DegenerateWhenEveryoneAgrees) {
  std::vector<RatingRecord> recs;
  for (int q = 0; q < 4; ++q)
    for (int r = 0; r < 5; ++r) {
      recs.push_back(make_record("q" + std::to_string(q), "r" + std::to_string(r), ModelId::DFR, 1));
      recs.push_back(make_record("q" + std::to_string(q), "r" + std::to_string(r), ModelId::SFR, 2));
    }
  const auto rep = aggregate(recs);
  EXPECT_EQ(rep.agreement_threshold, 0.0);
  EXPECT_EQ(rep.retained, 0u);
  EXPECT_EQ(rep.model_ratings[0], 0.0);
  EXPECT_EQ(rep.model_ratings[1], 0.0);
  ASSERT_FALSE(rep.diagnostics.empty());
  EXPECT_NE(rep.diagnostics.front().find("no rater retained"), std::string::npos);
}

TEST(Aggregate, NoRatingsAndIncompleteVectors) {
  try {
    aggregate(std::vector<RatingRecord>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoRatings);
  }
  // one model only: nothing to weigh, but still a report
  const std::vector<RatingRecord> lone = {make_record("q", "r", ModelId::DFR, 2)};
  const auto empty = aggregate(lone);
  EXPECT_EQ(empty.vectors, 0u);
  EXPECT_EQ(empty.incomplete_vectors, 1u);
  EXPECT_EQ(empty.model_ratings[0], 0.0);
  EXPECT_FALSE(empty.diagnostics.empty());
  auto recs = records_of({vec("q", "a", 2, 1), vec("q", "b", 0, 1), vec("q", "c", 2, 2)});
  recs.push_back(make_record("q", "d", ModelId::SFR, -1));
  const auto rep = aggregate(recs);
  EXPECT_EQ(rep.vectors, 3u);
  EXPECT_EQ(rep.incomplete_vectors, 1u);
  EXPECT_FALSE(rep.diagnostics.empty());
}

TEST(Aggregate, DuplicateRatingRejected) {
  auto recs = records_of({vec("q", "a", 2, 1)});
  recs.push_back(recs.front());
  try {
    aggregate(recs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateRating);
  }
}

TEST(Aggregate, DistributionsAndTiming) {
  // No Complex queries: all-zero counts and no timing rows there.
  std::vector<RatingVector> vs = {vec("q1", "a", 2, 2), vec("q1", "b", 2, 2), vec("q1", "c", 2, 2),
                                  vec("q1", "x", -1, -1), vec("q2", "a", 0, 1), vec("q2", "b", 0, 1),
                                  vec("q2", "c", 0, 1)};
  vs[0].elapsed_ms = {1500, 700};
  const QueryClassMap classes = {{"q1", PatternClass::Simple}, {"q2", PatternClass::Simple}};
  const RatingAnalysis analysis(vs, classes);
  // gammas: q1 a,b,c -> 6 each, x -> 18; q2 all 0.
  // A_T = median{6,6,6,18,0,0,0} = 6, so only q2 raters are retained.
  EXPECT_EQ(analysis.agreement_threshold(), 6.0);
  EXPECT_EQ(analysis.rating_distribution(ModelId::DFR, PatternClass::Complex), (RatingCounts{0, 0, 0, 0}));
  EXPECT_EQ(analysis.rating_distribution(ModelId::SFR, PatternClass::Simple), (RatingCounts{0, 0, 3, 0}));
  EXPECT_FALSE(analysis.median_elapsed(ModelId::DFR, PatternClass::Complex).has_value());
  const auto medians = analysis.time_stats(ModelId::SFR, PatternClass::Simple);
  EXPECT_FALSE(medians[rating_slot(2)].has_value());
  EXPECT_EQ(medians[rating_slot(1)], 1000.0);
}

TEST(Aggregate, SingleRatingMedianAndFlaggedTiming) {
  std::vector<RatingVector> vs = {vec("q1", "a", 2, 2), vec("q2", "a", 1, 1), vec("q2", "b", 1, 1),
                                  vec("q2", "c", -1, 2)};
  vs[0].elapsed_ms = {1500, 1500};
  // q1 gamma 0; q2 gammas {3,3,6}; A_T = median{0,3,3,6} = 3 -> only q1's rater retained
  const RatingAnalysis analysis(vs, {{"q1", PatternClass::Complex}, {"q2", PatternClass::Complex}});
  EXPECT_EQ(analysis.time_stats(ModelId::DFR, PatternClass::Complex)[rating_slot(2)], 1500.0);

  auto recs = records_of(vs);
  recs[0].flags = std::string(kElapsedOutOfRangeFlag);
  const auto rep = aggregate(recs, {{"q1", PatternClass::Complex}, {"q2", PatternClass::Complex}});
  // the only retained DFR timing is flagged, so no DFR timing row survives
  for (const auto& t : rep.timing) EXPECT_NE(t.model, ModelId::DFR);
  // the rating itself still counts: q1 has C = 1 and mean 2, q2 keeps nobody
  EXPECT_EQ(rep.model_ratings[0], 2.0);
}

TEST(Aggregate, MatchesIndependentImplementationOnSimulatedBenchmarks) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto world = testkit::make_world(seed);
    const auto panel = sim::make_panel(3 + seed % 3, seed % 2, seed % 3 == 0 ? 1 : 0, seed, sim::PanelStyle::Varied);
    const auto bench = sim::run_benchmark(world.index, world.inventory, world.queries, panel, seed, 10, {});
    const auto recs = sim::to_records(bench.vectors);
    const auto rep = aggregate(recs);
    const auto oracle = testkit::oracle_aggregate(recs);
    EXPECT_EQ(rep.agreement_threshold, oracle.threshold);
    EXPECT_EQ(rep.retained, oracle.retained);
    EXPECT_NEAR(rep.model_ratings[0], oracle.r_dfr, 1e-9) << "seed " << seed;
    EXPECT_NEAR(rep.model_ratings[1], oracle.r_sfr, 1e-9) << "seed " << seed;
  }
}

TEST(Aggregate, InvariantUnderRecordOrder) {
  const auto world = testkit::make_world(33);
  const auto panel = sim::make_panel(4, 1, 1, 33, sim::PanelStyle::Varied);
  auto recs = sim::to_records(sim::run_benchmark(world.index, world.inventory, world.queries, panel, 33, 10, {}).vectors);
  const auto base = to_json(aggregate(recs));
  std::mt19937_64 gen(5);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(recs.begin(), recs.end(), gen);
    EXPECT_EQ(to_json(aggregate(recs)), base);
  }
}

TEST(Aggregate, ConfidenceAndCountsMatchCountingOracle) {
  const auto world = testkit::make_world(44);
  const auto panel = sim::make_panel(4, 1, 1, 44, sim::PanelStyle::Varied);
  const auto vectors = sim::run_benchmark(world.index, world.inventory, world.queries, panel, 44, 10, {}).vectors;
  const auto classes = [&] {
    QueryClassMap m;
    for (const auto& q : world.queries) m[q.query_id] = classify_pattern(*q.pattern_label);
    return m;
  }();
  const RatingAnalysis analysis(vectors, classes);
  const double at = analysis.agreement_threshold();

  std::map<std::string, std::pair<int, int>> kept_total;
  std::map<std::pair<int, PatternClass>, RatingCounts> counts;
  for (const auto& q : world.queries) {
    std::vector<RatingVector> mine;
    for (const auto& v : vectors)
      if (v.query_id == q.query_id) mine.push_back(v);
    for (const auto& a : mine) {
      int g = 0;
      for (const auto& b : mine) g += std::abs(a.values[0] - b.values[0]) + std::abs(a.values[1] - b.values[1]);
      auto& kt = kept_total[q.query_id];
      ++kt.second;
      if (g < at) {
        ++kt.first;
        for (int m = 0; m < 2; ++m) ++counts[{m, classes.at(q.query_id)}][a.values[m] + 1];
      }
    }
  }
  for (const auto& qs : analysis.queries()) {
    const auto& [kept, total] = kept_total.at(qs.query_id);
    EXPECT_DOUBLE_EQ(qs.confidence, static_cast<double>(kept) / total);
  }
  for (int m = 0; m < 2; ++m)
    for (auto cls : {PatternClass::Simple, PatternClass::Complex})
      EXPECT_EQ(analysis.rating_distribution(m ? ModelId::SFR : ModelId::DFR, cls), (counts[{m, cls}]));
}

TEST(RatingsFile, FormatParseRoundTrip) {
  RatingRecord r = make_record("q-1", "alice@s1", ModelId::SFR, -1, 2345);
  r.flags = std::string(kElapsedOutOfRangeFlag);
  r.item_values = {2, 1, 0, -1, 2, 2, 1, 0, 0, -1};
  const auto line = format_rating(r);
  const auto back = parse_rating(line);
  EXPECT_EQ(back.query_id, r.query_id);
  EXPECT_EQ(back.rater_id, r.rater_id);
  EXPECT_EQ(back.model, r.model);
  EXPECT_EQ(back.value, r.value);
  EXPECT_EQ(back.elapsed_ms, r.elapsed_ms);
  EXPECT_EQ(back.timestamp, r.timestamp);
  EXPECT_EQ(back.flags, r.flags);
  EXPECT_EQ(back.item_values, r.item_values);
  EXPECT_TRUE(back.timing_flagged());
  EXPECT_EQ(format_rating(back), line);

  std::istringstream in(std::string(kRatingsHeader) + "\n\nq\tr\tDFR\t2\t10\t-\n# note\nq\tr\tSFR\t0\t11\t-\t-\t-\n");
  const auto recs = read_ratings(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(recs[0].timestamp.empty());
}

TEST(RatingsFile, RejectsMalformedLines) {
  auto code_of = [](const std::string& line) {
    try {
      parse_rating(line, 3);
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
      return e.code();
    }
    return ErrorCode::IoError;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code_of("q\tr\tDFR\t3\t10\tt"), ErrorCode::ValueOutOfRange);
  EXPECT_EQ(code_of("q\tr\tXYZ\t1\t10\tt"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("q\tr\tDFR\tone\t10\tt"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("q\tr\tDFR\t1\t-5\tt"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("q\tr\tDFR\t1"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("q\tr\tDFR\t1\t10\tt\t-\t1,9"), ErrorCode::ValueOutOfRange);
}

TEST(Report, RenderingsAreDeterministicAndComplete) {
  const auto world = testkit::make_world(55);
  const auto panel = sim::make_panel(4, 1, 0, 55, sim::PanelStyle::Varied);
  const auto recs = sim::to_records(sim::run_benchmark(world.index, world.inventory, world.queries, panel, 55, 10, {}).vectors);
  const auto rep = aggregate(recs);
  const auto json = to_json(rep);
  EXPECT_EQ(json, to_json(aggregate(recs)));
  EXPECT_NE(json.find("\"model_ratings\""), std::string::npos);
  EXPECT_NE(json.find("\"gamma_normalized\""), std::string::npos);
  const auto tables = render_tables(rep);
  for (const char* section : {"## model_ratings", "## queries", "## disagreement", "## distributions", "## timing"})
    EXPECT_NE(tables.find(section), std::string::npos) << section;
  EXPECT_NE(render_text(rep).find("Model ratings"), std::string::npos);
  for (const auto& r : rep.raters) {
    EXPECT_GE(r.gamma_normalized, 0.0);
    EXPECT_LE(r.gamma_normalized, 1.0);
  }
}
