// linkcomm: overlapping link communities in citation networks.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linkcomm/analysis.hpp"
#include "linkcomm/bench.hpp"
#include "linkcomm/cplc.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/export.hpp"
#include "linkcomm/graph.hpp"
#include "linkcomm/memetic.hpp"
#include "linkcomm/parallel.hpp"
#include "linkcomm/pipeline.hpp"
#include "linkcomm/projection.hpp"
#include "linkcomm/seeds.hpp"

using namespace linkcomm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
  RunConfig run;
  std::string schedule = "1/20,1/10,1/5,1/4,1/3";
  std::string manifest;
  std::string clusters;
  std::string r = "1/3";
  std::int64_t cluster_id = -1;
  std::string write_pruned;
  PlantedSpec planted;
  bool quiet = false;
};

void add_input(CLI::App* app, Options& o) {
  app->add_option("--input", o.run.input, "edge list: paper<TAB>source per line")->required()->check(CLI::ExistingFile);
}

void add_evolution(CLI::App* app, Options& o) {
  auto& e = o.run.evolution;
  app->add_option("--schedule", o.schedule, "resolution levels, increasing")->capture_default_str();
  app->add_option("--evolutions", e.num_evolutions, "independent evolutions per seed")->capture_default_str();
  app->add_option("--population", e.population_size, "individuals per evolution")->capture_default_str();
  app->add_option("--stagnation", e.stagnation_limit, "generations without improvement before stopping")
      ->capture_default_str();
  app->add_option("--mutation-rate", e.mutation_rate, "toggle probability per candidate move")->capture_default_str();
  app->add_option("--validation-trials", e.validation_trials, "evolutions confirming a cluster at later levels")
      ->capture_default_str();
  app->add_option("--rng-seed", e.rng_seed)->capture_default_str();
  app->add_option("--threads", e.threads, "worker threads (default: LINKCOMM_THREADS or all cores)");
}

void add_seeding(CLI::App* app, Options& o) {
  app->add_option("--seed-mode", o.run.seed_mode, "ward, explicit, secondary, towns or links")
      ->transform(CLI::CheckedTransformer(std::map<std::string, SeedMode>{{"ward", SeedMode::ward},
                                                                          {"explicit", SeedMode::explicit_sources},
                                                                          {"secondary", SeedMode::secondary},
                                                                          {"towns", SeedMode::towns},
                                                                          {"links", SeedMode::links}}));
  app->add_option("--graph-kind", o.run.graph_kind, "citation (paper<TAB>source) or plain (undirected a b)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, GraphKind>{{"citation", GraphKind::citation}, {"plain", GraphKind::plain}}));
  app->add_option("--seeds-file", o.run.seeds_file, "explicit seeds: source ids per line");
  app->add_option("--ward-seeds", o.run.ward_seeds, "long-branch Ward clusters used as seeds")->capture_default_str();
  app->add_flag("--geometric-classes", o.run.branches.geometric_classes, "bin cluster sizes by powers of two");
  app->add_option("--ranks-per-class", o.run.branches.ranks_per_class)->capture_default_str();
}

void add_analysis(CLI::App* app, Options& o) {
  app->add_option("--core-share", o.run.membership.core)->capture_default_str();
  app->add_option("--bridge-share", o.run.membership.bridge)->capture_default_str();
  app->add_option("--alpha", o.run.alpha, "co-citation significance level")->capture_default_str();
}

Graph load_pruned(const std::string& path) {
  auto loaded = load_edge_list_file(path);
  auto pruned = prune_single_citers(loaded.graph);
  if (pruned.empty) throw DomainError("no citation links left after removing papers with fewer than two sources");
  return std::move(pruned.graph);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& e : g.edges()) out << bare_id(g.name(e.a)) << '\t' << bare_id(g.name(e.b)) << '\n';
}

std::vector<LinkSet> read_clusters(const Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  const json j = json::parse(in);
  std::vector<LinkSet> out;
  for (const auto& rec : j) {
    // clusters.json also lists invalidated records
    if (rec.contains("invalidated_by") && !rec.at("invalidated_by").is_null()) continue;
    std::vector<EdgeId> links = rec.at("links").get<std::vector<EdgeId>>();
    for (EdgeId e : links)
      if (e < 0 || e >= g.num_edges()) throw std::invalid_argument("cluster file does not match the input graph");
    out.push_back(LinkSet::of(g, links));
  }
  return out;
}

void prepare(Options& o) {
  o.run.schedule = parse_schedule(o.schedule);
  if (o.run.evolution.threads == 0) o.run.evolution.threads = default_thread_count();
  set_warnings_enabled(!o.quiet);
}

int cmd_load(Options& o) {
  auto loaded = load_edge_list_file(o.run.input);
  auto pruned = prune_single_citers(loaded.graph);
  const Graph& g = pruned.graph;
  json j = {{"papers", g.count_role(NodeRole::paper)},
            {"sources", g.count_role(NodeRole::source)},
            {"links", g.num_edges()},
            {"duplicates", loaded.duplicates},
            {"removed_papers", pruned.removed_papers},
            {"removed_sources", pruned.removed_sources}};
  std::cout << j.dump(1) << '\n';
  if (!o.write_pruned.empty()) {
    std::ofstream out(o.write_pruned);
    write_edge_list(out, g);
  }
  return pruned.empty ? 2 : 0;
}

int cmd_seeds(Options& o) {
  const Graph g = load_pruned(o.run.input);
  const auto projection = cocitation_projection(g, o.run.alpha);
  const auto dendrogram = ward_dendrogram(view_distance_matrix(projection));
  fs::create_directories(o.run.out_dir);
  std::ofstream(fs::path(o.run.out_dir) / "dendrogram.json") << dendrogram_json(g, projection, dendrogram).dump(1) << '\n';
  const auto seeds = ward_seeds(g, projection, o.run.ward_seeds, o.run.branches);
  std::ofstream(fs::path(o.run.out_dir) / "seeds.json") << seeds_json(g, seeds).dump(1) << '\n';
  std::cout << seeds.size() << " seeds written to " << o.run.out_dir << '\n';
  return 0;
}

int cmd_run(Options& o) {
  RunConfig config = o.run;
  if (!o.manifest.empty()) {
    std::ifstream in(o.manifest);
    if (!in) throw std::runtime_error("cannot read " + o.manifest);
    config = RunConfig::from_json(json::parse(in).at("config"));
    if (!o.run.out_dir.empty() && o.run.out_dir != "out") config.out_dir = o.run.out_dir;
  }
  auto result = run_pipeline(config);
  std::cout << result.clusters.size() << " clusters; outputs in " << result.out_dir.string() << " (hash "
            << result.manifest_hash.substr(0, 16) << ")\n";
  return 0;
}

int cmd_cplc(Options& o) {
  const Graph g = load_pruned(o.run.input);
  const auto clusters = read_clusters(g, o.clusters);
  fs::create_directories(o.run.out_dir);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (o.cluster_id >= 0 && static_cast<std::size_t>(o.cluster_id) != k) continue;
    const auto stars = extract_stars(clusters[k]);
    const auto levels = explore_resolutions(clusters[k]);
    std::ofstream(fs::path(o.run.out_dir) / ("towns_" + std::to_string(k) + ".json"))
        << towns_json(g, stars, levels).dump(1) << '\n';
    std::cout << "cluster " << k << ": " << stars.size() << " stars, " << levels.size() << " levels\n";
  }
  return 0;
}

int cmd_analyze(Options& o) {
  const Graph g = load_pruned(o.run.input);
  const auto clusters = read_clusters(g, o.clusters);
  fs::create_directories(o.run.out_dir);
  const fs::path dir(o.run.out_dir);
  std::vector<std::size_t> ids(clusters.size());
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  const auto membership = source_membership(clusters, g, o.run.membership);
  std::ofstream m(dir / "membership.csv");
  write_membership_csv(m, g, ids, membership);
  if (clusters.size() >= 2) {
    std::ofstream ov(dir / "overlaps.csv");
    write_overlaps_csv(ov, ids, overlap_table(clusters));
    std::ofstream h(dir / "hierarchy.csv");
    write_hierarchy_csv(h, ids, poly_hierarchy(clusters));
  }
  const auto projection = cocitation_projection(g, o.run.alpha);
  if (projection.sources.size() >= 2) {
    const auto dendrogram = ward_dendrogram(view_distance_matrix(projection));
    std::ofstream mt(dir / "matches.csv");
    write_matches_csv(mt, g, ids, match_dendrogram(membership, dendrogram, projection));
  }
  const auto significant = significance_filter(projection, o.run.alpha);
  const auto views = cluster_views(clusters, g, significant, membership);
  for (std::size_t k = 0; k < views.size(); ++k) {
    std::ofstream v(dir / ("view_" + std::to_string(k) + ".graphml"));
    write_graphml_view(v, g, significant, views[k]);
  }
  std::cout << "analysis of " << clusters.size() << " clusters written to " << o.run.out_dir << '\n';
  return 0;
}

int cmd_cluster(Options& o) {
  const Graph g = load_pruned(o.run.input);
  std::vector<Seed> seeds;
  if (!o.run.seeds_file.empty()) {
    std::size_t line = 0;
    for (const auto& ids : read_seed_file(o.run.seeds_file)) {
      ++line;
      std::vector<NodeId> sources;
      for (const auto& id : ids) {
        auto x = g.find(source_name(id));
        if (!x) throw std::invalid_argument("unknown source '" + id + "'");
        sources.push_back(*x);
      }
      seeds.push_back({seed_links_for_sources(sources, g), "explicit " + std::to_string(line)});
    }
  } else {
    seeds = ward_seeds(g, cocitation_projection(g, o.run.alpha), o.run.ward_seeds, o.run.branches);
  }
  const auto result = run_schedule(seeds, o.run.schedule, o.run.evolution);
  fs::create_directories(o.run.out_dir);
  const fs::path dir(o.run.out_dir);
  std::ofstream(dir / "clusters.json") << cluster_records_json(result).dump(1) << '\n';
  std::ofstream csv(dir / "clusters.csv");
  write_clusters_csv(csv, result);
  std::cout << result.final_clusters().size() << " clusters valid at " << result.schedule.back().str() << '\n';
  return 0;
}

int cmd_bench(Options& o) {
  const auto planted = generate_planted(o.planted);
  fs::create_directories(o.run.out_dir);
  const fs::path dir(o.run.out_dir);
  std::ofstream edges(dir / "planted.tsv");
  write_edge_list(edges, planted.graph);
  std::ofstream(dir / "ground_truth.json") << planted_json(planted).dump(1) << '\n';
  std::cout << planted.graph.num_edges() << " links written to " << (dir / "planted.tsv").string() << '\n';
  return 0;
}

int cmd_oracle(Options& o) {
  auto loaded = o.run.graph_kind == GraphKind::plain ? load_plain_edge_list_file(o.run.input)
                                                     : load_edge_list_file(o.run.input);
  const Graph& g = loaded.graph;
  const auto valid = brute_force_valid_clusters(g, Resolution::parse(o.r));
  json out = json::array();
  for (const auto& l : valid) {
    json names = json::array();
    for (EdgeId e : l.edges())
      names.push_back(std::string(bare_id(g.name(g.edge(e).a))) + "-" + std::string(bare_id(g.name(g.edge(e).b))));
    out.push_back({{"links", names}, {"psi", psi(l).value}});
  }
  std::cout << out.dump(1) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping link communities in citation networks"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--quiet", o.quiet, "suppress warnings");

  auto* load = app.add_subcommand("load", "load, deduplicate and prune an edge list; print a summary");
  add_input(load, o);
  load->add_option("--write-pruned", o.write_pruned, "write the pruned edge list here");

  auto* seeds = app.add_subcommand("seeds", "Ward dendrogram of co-citation views and long-branch seeds");
  add_input(seeds, o);
  seeds->add_option("--out", o.run.out_dir)->capture_default_str();
  seeds->add_option("--count", o.run.ward_seeds)->capture_default_str();
  seeds->add_flag("--geometric-classes", o.run.branches.geometric_classes);
  seeds->add_option("--ranks-per-class", o.run.branches.ranks_per_class)->capture_default_str();
  seeds->add_option("--alpha", o.run.alpha)->capture_default_str();

  auto* cluster = app.add_subcommand("cluster", "evolve seeds over the resolution schedule");
  add_input(cluster, o);
  add_evolution(cluster, o);
  cluster->add_option("--seeds-file", o.run.seeds_file, "explicit seeds (default: Ward seeds)");
  cluster->add_option("--ward-seeds", o.run.ward_seeds)->capture_default_str();
  cluster->add_option("--out", o.run.out_dir)->capture_default_str();

  auto* cplc = app.add_subcommand("cplc", "town decompositions of clusters across q");
  add_input(cplc, o);
  cplc->add_option("--clusters", o.clusters, "clusters.json or final_clusters.json")->required();
  cplc->add_option("--id", o.cluster_id, "only this cluster");
  cplc->add_option("--out", o.run.out_dir)->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "membership, overlaps, hierarchy, matches, views");
  add_input(analyze, o);
  add_analysis(analyze, o);
  analyze->add_option("--clusters", o.clusters, "clusters.json or final_clusters.json")->required();
  analyze->add_option("--out", o.run.out_dir)->capture_default_str();

  auto* bench = app.add_subcommand("bench", "planted benchmark graph with ground truth");
  bench->add_option("--sources", o.planted.num_sources)->capture_default_str();
  bench->add_option("--groups", o.planted.num_groups)->capture_default_str();
  bench->add_option("--papers", o.planted.num_papers)->capture_default_str();
  bench->add_option("--citations", o.planted.citations_per_paper)->capture_default_str();
  bench->add_option("--mixing", o.planted.mixing)->capture_default_str();
  bench->add_option("--overlap", o.planted.overlap_fraction)->capture_default_str();
  bench->add_option("--rng-seed", o.planted.rng_seed)->capture_default_str();
  bench->add_option("--out", o.run.out_dir)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "exhaustive valid clusters of a small graph (at most 14 links)");
  add_input(oracle, o);
  oracle->add_option("--r", o.r, "resolution")->capture_default_str();
  oracle->add_option("--graph-kind", o.run.graph_kind, "citation or plain")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, GraphKind>{{"citation", GraphKind::citation}, {"plain", GraphKind::plain}}));

  auto* run = app.add_subcommand("run", "full pipeline with manifest");
  run->add_option("--input", o.run.input, "edge list: paper<TAB>source per line");
  run->add_option("--manifest", o.manifest, "re-run the configuration recorded in a manifest");
  add_evolution(run, o);
  add_seeding(run, o);
  add_analysis(run, o);
  run->add_option("--out", o.run.out_dir)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    prepare(o);
    if (*load) return cmd_load(o);
    if (*seeds) return cmd_seeds(o);
    if (*cluster) return cmd_cluster(o);
    if (*cplc) return cmd_cplc(o);
    if (*analyze) return cmd_analyze(o);
    if (*bench) return cmd_bench(o);
    if (*oracle) return cmd_oracle(o);
    if (*run) {
      if (o.manifest.empty() && o.run.input.empty()) throw std::invalid_argument("run needs --input or --manifest");
      return cmd_run(o);
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
