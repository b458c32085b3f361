// outfit: command-line front end for the recommender, corpus tooling,
// rating service and offline aggregation.

#include <charconv>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "outfit/aggregation.hpp"
#include "outfit/config.hpp"
#include "outfit/dataset.hpp"
#include "outfit/error.hpp"
#include "outfit/http_api.hpp"
#include "outfit/recommenders.hpp"
#include "outfit/service.hpp"
#include "outfit/simulation.hpp"
#include "outfit/tuple_index.hpp"

namespace fs = std::filesystem;
using namespace outfit;

namespace {

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path);
  out << text;
}

QueryClassMap classes_from(const std::string& queries_manifest) {
  if (queries_manifest.empty()) return {};
  const auto m = load_manifest(queries_manifest, ManifestRole::Queries);
  QueryClassMap out;
  for (const auto& r : m.records)
    if (r.label) out[r.id] = classify_pattern(*r.label);
  return out;
}

std::vector<ModelId> parse_models(const std::string& text) {
  std::vector<ModelId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_model(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no models given");
  return out;
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-based outfit recommender with a human-in-the-loop rating harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> tau_flag;
  app.add_option("--config", config_path, "JSON settings file")->check(CLI::ExistingFile);
  app.add_option("--tau", tau_flag, "Solidness threshold on normalized hue entropy (default 0.35)");

  // dataset -------------------------------------------------------------------
  auto* dataset = app.add_subcommand("dataset", "Generate or validate corpora");
  dataset->require_subcommand(1);

  auto* generate = dataset->add_subcommand("generate", "Render a synthetic swatch corpus");
  std::string gen_out, gen_inventory = "Solids=60,Polka=10,Stripes=10,Plaids=10,Animal=10,Floral=10,Geometric=10,Paisley=10",
                       gen_tuples = "Solids=100,Polka=50,Stripes=50,Plaids=50,Animal=50,Floral=50,Geometric=50,Paisley=50",
                       gen_queries = "Solids=10,Polka=10,Stripes=10,Plaids=10,Animal=10,Floral=10,Geometric=10,Paisley=10";
  std::uint64_t gen_seed = 1;
  int gen_size = 48;
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--size", gen_size, "Swatch edge length in pixels");
  generate->add_option("--inventory", gen_inventory, "Top counts per label, e.g. Solids=10,Polka=5");
  generate->add_option("--tuples", gen_tuples, "Tuple skirt counts per label");
  generate->add_option("--queries", gen_queries, "Query skirt counts per label");

  auto* validate_cmd = dataset->add_subcommand("validate", "Check a manifest and its stored features");
  std::string val_manifest, val_role, val_inventory;
  validate_cmd->add_option("--manifest", val_manifest, "Manifest to check")->required();
  validate_cmd->add_option("--role", val_role, "Expected role: tuples, inventory or queries");
  validate_cmd->add_option("--inventory", val_inventory, "Inventory manifest to resolve tuple top ids against");

  // index ---------------------------------------------------------------------
  auto* index_cmd = app.add_subcommand("index", "Build or query the tuple index");
  index_cmd->require_subcommand(1);
  auto* index_build = index_cmd->add_subcommand("build", "Index a tuples manifest");
  std::string ib_tuples, ib_inventory, ib_out;
  index_build->add_option("--tuples", ib_tuples, "Tuples manifest")->required();
  index_build->add_option("--inventory", ib_inventory, "Inventory manifest for reference checks");
  index_build->add_option("--out", ib_out, "Index file")->required();

  auto* index_query = index_cmd->add_subcommand("query", "k nearest tuples for images or a query manifest");
  std::string iq_index, iq_image, iq_queries;
  std::size_t iq_k = 10;
  index_query->add_option("--index", iq_index, "Index file")->required();
  auto* iq_img = index_query->add_option("--image", iq_image, "Query image");
  index_query->add_option("--queries", iq_queries, "Queries manifest")->excludes(iq_img);
  index_query->add_option("--k", iq_k, "Neighbours per query")->check(CLI::PositiveNumber);

  // recommend -----------------------------------------------------------------
  auto* recommend = app.add_subcommand("recommend", "Top-k tops for each query skirt");
  std::string rec_model, rec_queries, rec_corpus = ".", rec_index, rec_inventory;
  std::size_t rec_k = kDefaultListSize;
  std::uint64_t rec_seed = 0;
  recommend->add_option("--model", rec_model, "dfr or sfr")->required()->check(CLI::IsMember({"dfr", "sfr", "DFR", "SFR"}));
  recommend->add_option("--query", rec_queries, "Queries manifest")->required();
  recommend->add_option("--k", rec_k, "List size")->check(CLI::PositiveNumber);
  recommend->add_option("--seed", rec_seed, "SFR seed");
  recommend->add_option("--corpus", rec_corpus, "Directory with tuples/inventory manifests");
  recommend->add_option("--index", rec_index, "Prebuilt index file (DFR)");
  recommend->add_option("--inventory", rec_inventory, "Inventory manifest (SFR)");

  // serve ---------------------------------------------------------------------
  auto* serve = app.add_subcommand("serve", "Run the rating service");
  std::string srv_corpus = ".", srv_queries, srv_models = "dfr,sfr", srv_data = "ratings-data", srv_host = "0.0.0.0";
  int srv_port = 8080;
  serve->add_option("--port", srv_port, "Listen port");
  serve->add_option("--host", srv_host, "Listen address");
  serve->add_option("--corpus", srv_corpus, "Corpus directory");
  serve->add_option("--queries", srv_queries, "Queries manifest (defaults to the corpus one)");
  serve->add_option("--models", srv_models, "Comma-separated models to rate");
  serve->add_option("--data-dir", srv_data, "Directory for the session journal and ratings log");

  // aggregate / report ----------------------------------------------------------
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregate a ratings file into a JSON report");
  std::string agg_ratings, agg_queries, agg_out;
  aggregate_cmd->add_option("--ratings", agg_ratings, "Ratings file")->required()->check(CLI::ExistingFile);
  aggregate_cmd->add_option("--queries", agg_queries, "Queries manifest (pattern classes)");
  aggregate_cmd->add_option("--out", agg_out, "Write the report here instead of stdout");

  auto* report_cmd = app.add_subcommand("report", "Render a ratings file as text or flat tables");
  std::string rep_ratings, rep_queries, rep_format = "text", rep_out;
  report_cmd->add_option("--ratings", rep_ratings, "Ratings file")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--queries", rep_queries, "Queries manifest (pattern classes)");
  report_cmd->add_option("--format", rep_format, "text or table")->check(CLI::IsMember({"text", "table"}));
  report_cmd->add_option("--out", rep_out, "Output file");

  // simulate ------------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Rate a corpus with a simulated rater panel");
  std::string sim_corpus = ".", sim_out;
  std::size_t sim_concordant = 4, sim_adversarial = 1, sim_noisy = 0, sim_k = kDefaultListSize;
  std::uint64_t sim_seed = 1;
  bool sim_uniform = false;
  simulate->add_option("--corpus", sim_corpus, "Corpus directory");
  simulate->add_option("--concordant", sim_concordant, "Concordant raters per query");
  simulate->add_option("--adversarial", sim_adversarial, "Adversarial raters per query");
  simulate->add_option("--noisy", sim_noisy, "Noisy raters per query");
  simulate->add_option("--seed", sim_seed, "Simulation seed");
  simulate->add_option("--k", sim_k, "List size")->check(CLI::PositiveNumber);
  simulate->add_flag("--uniform", sim_uniform, "Identical concordant raters instead of a varied panel");
  simulate->add_option("--out", sim_out, "Ratings file to write (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    Settings settings = config_path.empty() ? Settings{} : load_settings(config_path);
    if (tau_flag) settings.solidness_threshold = *tau_flag;
    validate(settings);
    const double tau = settings.solidness_threshold;

    if (generate->parsed()) {
      GeneratorConfig cfg;
      cfg.inventory = parse_label_counts(gen_inventory);
      cfg.tuple_skirts = parse_label_counts(gen_tuples);
      cfg.queries = parse_label_counts(gen_queries);
      cfg.image_size = gen_size;
      cfg.seed = gen_seed;
      const auto out = generate_synthetic(cfg, gen_out);
      for (const auto& p : {out.inventory, out.tuples, out.queries})
        if (p) std::cout << p->string() << "\n";
      return 0;
    }

    if (validate_cmd->parsed()) {
      const auto m = val_role.empty() ? load_manifest(val_manifest)
                                      : load_manifest(val_manifest, parse_manifest_role(val_role));
      if (!val_inventory.empty()) check_references(m, load_manifest(val_inventory, ManifestRole::Inventory));
      const auto mismatches = verify_features(m);
      for (const auto& mm : mismatches) std::cerr << mm.id << ": " << mm.detail << "\n";
      std::cout << m.source.string() << ": " << to_string(m.role) << ", " << m.records.size() << " records, "
                << (mismatches.empty() ? "ok" : std::to_string(mismatches.size()) + " feature mismatches") << "\n";
      return mismatches.empty() ? 0 : 1;
    }

    if (index_build->parsed()) {
      const auto tuples = load_manifest(ib_tuples, ManifestRole::Tuples);
      if (!ib_inventory.empty()) check_references(tuples, load_manifest(ib_inventory, ManifestRole::Inventory));
      const auto index = build_index(ingest_tuples(tuples));
      index.save(ib_out);
      std::cout << "indexed " << index.size() << " tuples into " << ib_out << "\n";
      return 0;
    }

    if (index_query->parsed()) {
      const auto index = TupleIndex::load(iq_index);
      std::vector<Query> queries;
      if (!iq_image.empty()) queries.push_back({iq_image, iq_image, extract_histogram(load_image(iq_image)), {}});
      else if (!iq_queries.empty()) queries = ingest_queries(load_manifest(iq_queries, ManifestRole::Queries));
      else throw Error(ErrorCode::InvalidArgument, "give --image or --queries");
      std::vector<ColorHistogram> features;
      for (const auto& q : queries) features.push_back(q.feature);
      const auto results = index.query_batch(features, iq_k);
      std::cout << "#query_id\trank\ttuple_id\ttop_item_id\tdistance\n";
      for (std::size_t i = 0; i < queries.size(); ++i)
        for (const auto& n : results[i])
          std::cout << queries[i].query_id << "\t" << n.rank << "\t" << n.tuple_id << "\t" << n.top_item_id << "\t"
                    << num(n.distance) << "\n";
      return 0;
    }

    if (recommend->parsed()) {
      const ModelId model = parse_model(rec_model);
      const auto queries = ingest_queries(load_manifest(rec_queries, ManifestRole::Queries));
      std::vector<RecommendationList> lists;
      if (model == ModelId::DFR) {
        const auto index = !rec_index.empty()
                               ? TupleIndex::load(rec_index)
                               : build_index(ingest_tuples(load_manifest(fs::path(rec_corpus) / kTuplesManifestName,
                                                                         ManifestRole::Tuples)));
        for (const auto& q : queries) lists.push_back(dfr_recommend(index, q, rec_k));
      } else {
        const fs::path inv = rec_inventory.empty() ? fs::path(rec_corpus) / kInventoryManifestName : fs::path(rec_inventory);
        const auto inventory = ingest_inventory(load_manifest(inv, ManifestRole::Inventory), tau);
        for (const auto& q : queries)
          lists.push_back(sfr_recommend(inventory, q, rec_k, rec_seed, settings.sfr_options()));
      }
      std::cout << "#query_id\trank\titem_id\tscore\n";
      for (const auto& l : lists)
        for (std::size_t r = 0; r < l.entries.size(); ++r)
          std::cout << l.query_id << "\t" << r + 1 << "\t" << l.entries[r].item_id << "\t" << num(l.entries[r].score)
                    << "\n";
      return 0;
    }

    if (serve->parsed()) {
      std::optional<fs::path> queries;
      if (!srv_queries.empty()) queries = srv_queries;
      service::RatingService svc(load_corpus(srv_corpus, tau, queries), settings, srv_data, parse_models(srv_models));
      httplib::Server server;
      service::register_routes(server, svc);
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cerr << "serving " << svc.corpus().queries.size() << " queries on " << srv_host << ":" << srv_port
                << " (data in " << srv_data << ")\n";
      if (!server.listen(srv_host, srv_port)) throw Error(ErrorCode::IoError, "cannot listen on port " + std::to_string(srv_port));
      return 0;
    }

    if (aggregate_cmd->parsed()) {
      const auto records = read_ratings_file(agg_ratings);
      const auto report = aggregate(records, classes_from(agg_queries));
      for (const auto& d : report.diagnostics) std::cerr << "warning: " << d << "\n";
      write_or_print(to_json(report), agg_out);
      return 0;
    }

    if (report_cmd->parsed()) {
      const auto records = read_ratings_file(rep_ratings);
      const auto report = aggregate(records, classes_from(rep_queries));
      write_or_print(rep_format == "table" ? render_tables(report) : render_text(report), rep_out);
      return 0;
    }

    if (simulate->parsed()) {
      const auto corpus = load_corpus(sim_corpus, tau);
      const auto panel = sim::make_panel(sim_concordant, sim_adversarial, sim_noisy, sim_seed,
                                         sim_uniform ? sim::PanelStyle::Uniform : sim::PanelStyle::Varied);
      const auto bench = sim::run_benchmark(corpus.index, corpus.inventory, corpus.queries, panel, sim_seed, sim_k,
                                            settings.sfr_options());
      std::string text(kRatingsHeader);
      text += "\n";
      for (const auto& r : sim::to_records(bench.vectors)) text += format_rating(r) + "\n";
      write_or_print(text, sim_out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
