#include "linkcomm/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "linkcomm/cplc.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/export.hpp"
#include "linkcomm/graph.hpp"
#include "linkcomm/projection.hpp"

namespace linkcomm {

using nlohmann::json;
namespace fs = std::filesystem;

const char* seed_mode_name(SeedMode m) {
  switch (m) {
    case SeedMode::ward: return "ward";
    case SeedMode::explicit_sources: return "explicit";
    case SeedMode::secondary: return "secondary";
    case SeedMode::towns: return "towns";
    case SeedMode::links: return "links";
  }
  return "?";
}

SeedMode parse_seed_mode(const std::string& s) {
  if (s == "ward") return SeedMode::ward;
  if (s == "explicit") return SeedMode::explicit_sources;
  if (s == "secondary") return SeedMode::secondary;
  if (s == "towns") return SeedMode::towns;
  if (s == "links") return SeedMode::links;
  throw std::invalid_argument("unknown seed mode '" + s + "' (ward, explicit, secondary, towns, links)");
}

void RunConfig::validate() const {
  if (input.empty()) throw std::invalid_argument("no input file given");
  if (schedule.empty()) throw std::invalid_argument("empty resolution schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i - 1] < schedule[i])) throw std::invalid_argument("schedule must be strictly increasing");
  evolution.validate();
  if (ward_seeds < 1) throw std::invalid_argument("need at least one Ward seed");
  if (branches.ranks_per_class < 1) throw std::invalid_argument("ranks per class must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  for (double t : {membership.core, membership.bridge, membership.majority})
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("membership thresholds must lie in (0, 1)");
  if (seed_mode == SeedMode::explicit_sources && seeds_file.empty())
    throw std::invalid_argument("explicit seed mode needs a seeds file");
  if (graph_kind == GraphKind::plain && seed_mode != SeedMode::links)
    throw std::invalid_argument("plain graphs have no sources; use seed mode links");
}

json RunConfig::to_json() const {
  const auto& e = evolution;
  return {{"input", input},
          {"graph_kind", graph_kind == GraphKind::plain ? "plain" : "citation"},
          {"schedule", schedule_str(schedule)},
          {"evolution",
           {{"population_size", e.population_size},
            {"num_evolutions", e.num_evolutions},
            {"stagnation_limit", e.stagnation_limit},
            {"mutation_rate", e.mutation_rate},
            {"crossover_pairs", e.crossover_pairs},
            {"mutants_per_generation", e.mutants_per_generation},
            {"max_consolidations", e.max_consolidations},
            {"validation_trials", e.validation_trials},
            {"rng_seed", e.rng_seed},
            {"threads", e.threads}}},
          {"seed_mode", seed_mode_name(seed_mode)},
          {"seeds_file", seeds_file},
          {"ward_seeds", ward_seeds},
          {"branches", {{"geometric_classes", branches.geometric_classes}, {"ranks_per_class", branches.ranks_per_class}}},
          {"membership", {{"core", membership.core}, {"bridge", membership.bridge}, {"majority", membership.majority}}},
          {"alpha", alpha},
          {"out_dir", out_dir}};
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.input = j.at("input").get<std::string>();
  const auto kind = j.value("graph_kind", std::string("citation"));
  if (kind != "citation" && kind != "plain") throw std::invalid_argument("unknown graph kind '" + kind + "'");
  c.graph_kind = kind == "plain" ? GraphKind::plain : GraphKind::citation;
  c.schedule = parse_schedule(j.at("schedule").get<std::string>());
  const auto& e = j.at("evolution");
  c.evolution.population_size = e.at("population_size").get<int>();
  c.evolution.num_evolutions = e.at("num_evolutions").get<int>();
  c.evolution.stagnation_limit = e.at("stagnation_limit").get<int>();
  c.evolution.mutation_rate = e.at("mutation_rate").get<double>();
  c.evolution.crossover_pairs = e.at("crossover_pairs").get<int>();
  c.evolution.mutants_per_generation = e.at("mutants_per_generation").get<int>();
  c.evolution.max_consolidations = e.at("max_consolidations").get<int>();
  c.evolution.validation_trials = e.at("validation_trials").get<int>();
  c.evolution.rng_seed = e.at("rng_seed").get<std::uint64_t>();
  c.evolution.threads = e.at("threads").get<unsigned>();
  c.seed_mode = parse_seed_mode(j.at("seed_mode").get<std::string>());
  c.seeds_file = j.at("seeds_file").get<std::string>();
  c.ward_seeds = j.at("ward_seeds").get<std::int32_t>();
  c.branches.geometric_classes = j.at("branches").at("geometric_classes").get<bool>();
  c.branches.ranks_per_class = j.at("branches").at("ranks_per_class").get<std::int32_t>();
  c.membership.core = j.at("membership").at("core").get<double>();
  c.membership.bridge = j.at("membership").at("bridge").get<double>();
  c.membership.majority = j.at("membership").at("majority").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.out_dir = j.at("out_dir").get<std::string>();
  return c;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string file_sha256(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::vector<std::vector<std::string>> read_seed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read seeds file " + path);
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<std::string> ids;
    for (std::string id; ss >> id;) ids.push_back(id);
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

namespace {

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  body(out);
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

void write_json(const fs::path& p, const json& j) {
  write_file(p, [&](std::ostream& out) { out << j.dump(1) << '\n'; });
}

// Parts of the configuration that can change results.
json result_config(const RunConfig& c) {
  json j = c.to_json();
  j.erase("out_dir");
  j.erase("input");
  j["evolution"].erase("threads");
  return j;
}

json schedule_json(const ScheduleResult& r) {
  json levels = json::array();
  for (std::size_t l = 0; l < r.schedule.size(); ++l) levels.push_back({{"r", r.schedule[l].str()}, {"survivors", r.survivors[l]}});
  json inv = json::array();
  for (const auto& i : r.invalidations)
    inv.push_back({{"level", r.schedule[i.level].str()}, {"cluster", i.cluster}, {"by", i.by}});
  return {{"levels", levels}, {"invalidations", inv}, {"evolution_seconds", r.evolution_seconds}};
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  config.validate();
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  fs::remove(out_dir / "FAILED");

  json manifest;
  manifest["config"] = config.to_json();
  manifest["status"] = "running";
  std::string stage = "setup";
  auto finish_manifest = [&] { write_json(out_dir / "manifest.json", manifest); };

  PipelineResult result;
  result.out_dir = out_dir;
  try {
    stage = "load";
    const std::string input_digest = file_sha256(config.input);
    const bool plain = config.graph_kind == GraphKind::plain;
    auto loaded = plain ? load_plain_edge_list_file(config.input) : load_edge_list_file(config.input);
    PruneResult pruned;
    if (plain) {
      if (loaded.graph.num_edges() < 2) throw DomainError("need at least two links");
      pruned.graph = std::move(loaded.graph);
    } else {
      pruned = prune_single_citers(loaded.graph);
      if (pruned.empty) throw DomainError("no citation links left after removing papers with fewer than two sources");
    }
    auto graph = std::make_shared<const Graph>(std::move(pruned.graph));
    const Graph& g = *graph;
    result.graph = graph;
    const json summary = {{"nodes", g.num_nodes()},
                          {"papers", g.count_role(NodeRole::paper)},
                          {"sources", g.count_role(NodeRole::source)},
                          {"links", g.num_edges()},
                          {"duplicates", loaded.duplicates},
                          {"removed_papers", pruned.removed_papers},
                          {"removed_sources", pruned.removed_sources}};
    write_json(out_dir / "graph_summary.json", summary);
    manifest["input"] = {{"path", config.input}, {"sha256", input_digest}, {"graph", summary}};
    result.manifest_hash = sha256_hex(result_config(config).dump() + input_digest);
    manifest["hash"] = result.manifest_hash;

    stage = "projection";
    CoCitationProjection projection, significant;
    if (!plain) {
      projection = cocitation_projection(g, config.alpha);
      significant = significance_filter(projection, config.alpha);
    }

    stage = "seeds";
    std::vector<Seed> seeds;
    Dendrogram dendrogram;
    bool have_dendrogram = false;
    if (config.seed_mode == SeedMode::explicit_sources) {
      std::size_t line = 0;
      for (const auto& ids : read_seed_file(config.seeds_file)) {
        ++line;
        std::vector<NodeId> sources;
        for (const auto& id : ids) {
          auto x = g.find(source_name(id));
          if (!x) throw std::invalid_argument("seed line " + std::to_string(line) + ": unknown source '" + id + "'");
          sources.push_back(*x);
        }
        LinkSet l = seed_links_for_sources(sources, g);
        if (l.size() == g.num_edges()) throw std::invalid_argument("seed line " + std::to_string(line) + " covers every link");
        seeds.push_back({std::move(l), "explicit " + std::to_string(line)});
      }
      if (seeds.empty()) throw std::invalid_argument("seeds file lists no seeds");
    } else if (config.seed_mode == SeedMode::links) {
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        seeds.push_back({LinkSet::of(g, std::vector<EdgeId>{e}),
                         "link " + std::string(bare_id(g.name(ed.a))) + "-" + std::string(bare_id(g.name(ed.b)))});
      }
    } else {
      dendrogram = ward_dendrogram(view_distance_matrix(projection));
      have_dendrogram = true;
      write_json(out_dir / "dendrogram.json", dendrogram_json(g, projection, dendrogram));
      for (const auto& b : select_long_branch_clusters(dendrogram, config.ward_seeds, config.branches)) {
        std::vector<NodeId> sources;
        for (auto leaf : dendrogram.members(b.cluster)) sources.push_back(projection.sources[static_cast<std::size_t>(leaf)]);
        LinkSet l = seed_links_for_sources(sources, g);
        if (l.size() == g.num_edges()) continue;
        seeds.push_back({std::move(l), "ward " + std::to_string(b.cluster)});
      }
      if (seeds.empty()) throw DomainError("no usable Ward seeds");
    }
    write_json(out_dir / "seeds.json", seeds_json(g, seeds));

    stage = "cluster";
    EvolutionConfig evo = config.evolution;
    DescentCache cache;
    const auto primary = run_schedule(seeds, config.schedule, evo, &cache);
    write_json(out_dir / "clusters.json", cluster_records_json(primary));
    write_file(out_dir / "clusters.csv", [&](std::ostream& o) { write_clusters_csv(o, primary); });
    write_file(out_dir / "invalidations.csv", [&](std::ostream& o) { write_invalidations_csv(o, primary); });
    manifest["seeds"] = json::array();
    for (const auto& s : seeds) manifest["seeds"].push_back({{"label", s.label}, {"size", s.links.size()}});
    manifest["primary"] = schedule_json(primary);

    std::vector<LinkSet> final_sets;
    std::vector<std::string> origin;
    for (const auto* r : primary.final_clusters()) {
      final_sets.push_back(r->links);
      origin.push_back("primary " + std::to_string(r->id));
    }

    stage = "cplc";
    fs::create_directories(out_dir / "towns");
    std::vector<Seed> town_seed_list;
    for (std::size_t k = 0; k < final_sets.size(); ++k) {
      const auto stars = extract_stars(final_sets[k]);
      const auto levels = explore_resolutions(final_sets[k]);
      write_json(out_dir / "towns" / ("cluster_" + std::to_string(k) + ".json"), towns_json(g, stars, levels));
      auto chosen = std::find_if(levels.begin(), levels.end(), [](const ResolutionLevel& l) { return l.largest_split; });
      if (chosen == levels.end()) continue;
      write_file(out_dir / "towns" / ("cluster_" + std::to_string(k) + ".graphml"),
                 [&](std::ostream& o) { write_graphml_towns(o, g, stars, chosen->decomposition); });
      for (auto& s : town_seeds(g, stars, chosen->decomposition, "cluster " + std::to_string(k)))
        town_seed_list.push_back(std::move(s));
    }

    if (config.seed_mode == SeedMode::secondary || config.seed_mode == SeedMode::towns) {
      stage = "secondary";
      std::vector<Seed> extra = config.seed_mode == SeedMode::towns
                                    ? derive_secondary_seeds({}, town_seed_list)
                                    : derive_secondary_seeds(final_sets, town_seed_list);
      // seeds equal to a known cluster add nothing
      extra.erase(std::remove_if(extra.begin(), extra.end(),
                                 [&](const Seed& s) {
                                   return std::find(final_sets.begin(), final_sets.end(), s.links) != final_sets.end();
                                 }),
                  extra.end());
      write_json(out_dir / "secondary_seeds.json", seeds_json(g, extra));
      if (!extra.empty()) {
        const auto secondary = run_schedule(extra, config.schedule, evo, &cache);
        write_json(out_dir / "secondary_clusters.json", cluster_records_json(secondary));
        write_file(out_dir / "secondary_clusters.csv", [&](std::ostream& o) { write_clusters_csv(o, secondary); });
        manifest["secondary"] = schedule_json(secondary);
        for (const auto* r : secondary.final_clusters()) {
          if (std::find(final_sets.begin(), final_sets.end(), r->links) != final_sets.end()) continue;
          final_sets.push_back(r->links);
          origin.push_back("secondary " + std::to_string(r->id));
        }
      }
    }

    stage = "analyze";
    std::vector<std::size_t> ids(final_sets.size());
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
    write_file(out_dir / "final_clusters.csv", [&](std::ostream& o) {
      o << "id,origin,links,psi,escape_probability\n";
      for (std::size_t k = 0; k < final_sets.size(); ++k)
        o << k << ',' << csv_field(origin[k]) << ',' << final_sets[k].size() << ','
          << format_double(psi(final_sets[k]).value) << ',' << format_double(escape_probability(final_sets[k])) << '\n';
    });
    write_json(out_dir / "final_clusters.json", [&] {
      json j = json::array();
      for (std::size_t k = 0; k < final_sets.size(); ++k)
        j.push_back({{"id", k}, {"origin", origin[k]}, {"links", link_set_json(final_sets[k])}});
      return j;
    }());
    if (final_sets.size() >= 2) {
      write_file(out_dir / "overlaps.csv", [&](std::ostream& o) { write_overlaps_csv(o, ids, overlap_table(final_sets)); });
      write_file(out_dir / "hierarchy.csv", [&](std::ostream& o) { write_hierarchy_csv(o, ids, poly_hierarchy(final_sets)); });
    }
    write_file(out_dir / "clusters.graphml", [&](std::ostream& o) { write_graphml_clusters(o, g, final_sets); });
    if (!plain) {
      const auto membership = source_membership(final_sets, g, config.membership);
      write_file(out_dir / "membership.csv", [&](std::ostream& o) { write_membership_csv(o, g, ids, membership); });
      fs::create_directories(out_dir / "views");
      const auto views = cluster_views(final_sets, g, significant, membership);
      for (std::size_t k = 0; k < views.size(); ++k)
        write_file(out_dir / "views" / ("cluster_" + std::to_string(k) + ".graphml"),
                   [&](std::ostream& o) { write_graphml_view(o, g, significant, views[k]); });
      if (have_dendrogram) {
        const auto matches = match_dendrogram(membership, dendrogram, projection);
        write_file(out_dir / "matches.csv", [&](std::ostream& o) { write_matches_csv(o, g, ids, matches); });
      }
    }

    result.clusters = std::move(final_sets);
    manifest["status"] = "ok";
    finish_manifest();
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["failed_stage"] = stage;
    manifest["error"] = e.what();
    try {
      finish_manifest();
      write_file(out_dir / "FAILED", [&](std::ostream& o) { o << stage << ": " << e.what() << '\n'; });
    } catch (...) {
    }
    throw StageError(stage, e.what());
  }
  return result;
}

}  // namespace linkcomm
