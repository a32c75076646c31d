// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N] [--work DIR]
//
// Budgets for criteria that run evolutions are stated for a 4-core machine
// and scale by 4 / min(4, cores) here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "linkcomm/analysis.hpp"
#include "linkcomm/bench.hpp"
#include "linkcomm/cplc.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/local_search.hpp"
#include "linkcomm/memetic.hpp"
#include "linkcomm/parallel.hpp"
#include "linkcomm/pipeline.hpp"
#include "linkcomm/psi.hpp"
#include "linkcomm/seeds.hpp"

using namespace linkcomm;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }

double hardware_scale() {
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  return 4.0 / std::min(4u, cores);
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

fs::path g_work = "acceptance_work";

// 1 -------------------------------------------------------------------------

Verdict psi_symmetry() {
  std::mt19937_64 rng(101);
  double worst = 0;
  int subsets = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 20 + static_cast<int>(rng() % 181);
    const int m = std::min<long>(n - 1 + static_cast<int>(rng() % 1000), 1000);
    const Graph g = fixtures::random_graph(n, m, rng);
    for (int k = 0; k < 50; ++k) {
      const double p = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000;
      std::vector<EdgeId> pick;
      for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (static_cast<double>(rng() % 100000) / 100000 < p) pick.push_back(e);
      if (pick.empty()) pick.push_back(0);
      if (static_cast<EdgeId>(pick.size()) == g.num_edges()) pick.pop_back();
      const LinkSet l = LinkSet::of(g, pick);
      worst = std::max(worst, std::abs(psi(l).value - psi(complement(l)).value));
      ++subsets;
    }
  }
  return {subsets == 1000 && worst <= 1e-12, std::to_string(subsets) + " subsets, max |diff| " + fmt(worst)};
}

// 2 -------------------------------------------------------------------------

// Cost of the set from scratch, independent of the cached class sums.
double psi_from_scratch(const Graph& g, const std::vector<bool>& in) {
  std::vector<std::int64_t> k(static_cast<std::size_t>(g.num_nodes()), 0);
  std::int64_t links = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!in[static_cast<std::size_t>(e)]) continue;
    ++links;
    ++k[static_cast<std::size_t>(g.edge(e).a)];
    ++k[static_cast<std::size_t>(g.edge(e).b)];
  }
  double s = 0;
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    const auto ki = k[static_cast<std::size_t>(x)];
    if (ki > 0 && ki < g.degree(x)) s += static_cast<double>(ki * (g.degree(x) - ki)) / g.degree(x);
  }
  return s / static_cast<double>(2 * links) + s / static_cast<double>(2 * (g.num_edges() - links));
}

Verdict incremental_moves() {
  std::mt19937_64 rng(202);
  double worst = 0;
  int moves = 0;
  while (moves < 10000) {
    const Graph g = fixtures::random_connected_graph(60, 300, rng);
    LinkSet l = LinkSet::of(g, std::vector<EdgeId>{static_cast<EdgeId>(rng() % static_cast<unsigned>(g.num_edges()))});
    std::vector<bool> in = fixtures::mask_of(l);
    for (int step = 0; step < 1000 && moves < 10000; ++step) {
      // a move from the search's own neighbourhood: attached additions or any removal
      const auto cand = candidate_moves(l);
      const std::size_t options = cand.additions.size() + cand.removals.size();
      if (options == 0) break;
      const std::size_t pick = rng() % options;
      const bool removing = pick >= cand.additions.size();
      const EdgeId e = removing ? cand.removals[pick - cand.additions.size()] : cand.additions[pick];
      if (removing ? l.size() == 1 : l.size() == g.num_edges() - 1) continue;
      const double predicted = psi_after_move(l, e, removing ? Move::remove : Move::add).value;
      l.toggle(e);
      in[static_cast<std::size_t>(e)] = !removing;
      worst = std::max({worst, std::abs(predicted - psi_from_scratch(g, in)), std::abs(psi(l).value - predicted)});
      ++moves;
    }
  }
  return {worst <= 1e-12, std::to_string(moves) + " moves, max |diff| " + fmt(worst)};
}

// 3 -------------------------------------------------------------------------

Verdict hand_landscape() {
  const Graph g = fixtures::two_triangle_bridge();
  const LinkSet tri = LinkSet::of(g, std::vector<EdgeId>{0, 1, 2});
  const bool exact = fixtures::psi_exact(g, fixtures::mask_of(tri)) == fixtures::Rational(7, 36);
  const bool close = std::abs(psi(tri).value - 7.0 / 36) <= 1e-15;
  const LinkSet other = LinkSet::of(g, std::vector<EdgeId>{4, 5, 6});
  int hits = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    // either triangle, or either triangle's complement (a triangle plus the bridge)
    const auto t = tunneling_descent(LinkSet::of(g, std::vector<EdgeId>{e}), Resolution(1, 3));
    hits += t.best == tri || t.best == other || t.best == complement(tri) || t.best == complement(other);
  }
  return {exact && close && hits == g.num_edges(),
          std::string("rational 7/36 ") + (exact ? "exact" : "WRONG") + ", " + std::to_string(hits) + "/7 descents end in a triangle or a complement"};
}

// 4 and 5 -------------------------------------------------------------------

std::vector<Graph> oracle_suite() {
  std::mt19937_64 rng(2024);
  std::vector<Graph> out;
  while (out.size() < 50) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const int m = std::min(10, n - 1 + static_cast<int>(rng() % 6));
    Graph g = fixtures::random_connected_graph(n, m, rng);
    if (g.num_edges() >= 2) out.push_back(std::move(g));
  }
  return out;
}

bool holds(const std::vector<LinkSet>& v, const LinkSet& l) { return std::find(v.begin(), v.end(), l) != v.end(); }

Verdict oracle_equivalence() {
  EvolutionConfig cfg;
  cfg.resolution = Resolution(1, 3);
  cfg.threads = default_thread_count();
  int returned = 0, invalid = 0, valid_total = 0, found = 0;
  for (const Graph& g : oracle_suite()) {
    const auto valid = brute_force_valid_clusters(g, cfg.resolution);
    std::vector<LinkSet> got;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      auto r = evolve(LinkSet::of(g, std::vector<EdgeId>{e}), cfg);
      if (!holds(got, r.best)) got.push_back(std::move(r.best));
    }
    for (const auto& x : got) {
      ++returned;
      invalid += !holds(valid, x);
    }
    for (const auto& v : valid) {
      ++valid_total;
      found += holds(got, v);
    }
  }
  const double recall = valid_total ? static_cast<double>(found) / valid_total : 1.0;
  return {invalid == 0 && recall >= 0.9, std::to_string(returned) + " returned, " + std::to_string(invalid) + " invalid; recall " +
                                             std::to_string(found) + "/" + std::to_string(valid_total) + " = " + fmt(recall)};
}

Verdict validity_monotonicity() {
  EvolutionConfig cfg;
  cfg.threads = default_thread_count();
  const auto schedule = standard_schedule();
  int finals = 0, stable = 0, oracle_ok = 0, checks = 0;
  for (const Graph& g : oracle_suite()) {
    std::vector<Seed> seeds;
    for (EdgeId e = 0; e < g.num_edges(); ++e) seeds.push_back({LinkSet::of(g, std::vector<EdgeId>{e}), "link " + std::to_string(e)});
    const auto result = run_schedule(seeds, schedule, cfg);
    std::vector<std::vector<LinkSet>> oracle;
    for (const auto& r : schedule) oracle.push_back(brute_force_valid_clusters(g, r));
    for (const ClusterRecord* rec : result.final_clusters()) {
      ++finals;
      bool ok = rec->valid_at.size() == schedule.size();
      for (std::size_t level = 0; level + 1 < schedule.size(); ++level) {
        auto c = cfg;
        c.resolution = schedule[level];
        ok = ok && evolve(rec->links, c).best == rec->links;
        ++checks;
        oracle_ok += holds(oracle[level], rec->links);
      }
      stable += ok;
    }
  }
  return {finals > 0 && stable == finals, std::to_string(stable) + "/" + std::to_string(finals) +
                                              " final clusters re-verify unchanged at every lower r (oracle agrees on " +
                                              std::to_string(oracle_ok) + "/" + std::to_string(checks) + ")"};
}

// 6 -------------------------------------------------------------------------

Graph two_stars(int na, int nb, int shared) {
  std::ostringstream text;
  for (int p = 1; p <= na; ++p) text << "p" << p << "\ta\n";
  for (int p = na - shared + 1; p <= na - shared + nb; ++p) text << "p" << p << "\tb\n";
  std::istringstream in(text.str());
  return load_edge_list(in).graph;
}

Verdict cplc_breakpoints() {
  bool toy = true;
  {
    const Graph g = two_stars(10, 8, 3);
    const LinkSet all = LinkSet::all(g);
    const auto stars = extract_stars(all);
    for (Overlap q : {Overlap{0, 1}, Overlap{1, 10}, Overlap{37, 100}, Overlap{374, 1000}})
      toy = toy && build_towns(stars, q).towns.size() == 1;
    for (Overlap q : {Overlap{3, 8}, Overlap{1, 2}, Overlap{9, 10}}) toy = toy && build_towns(stars, q).towns.size() == 2;
    const auto levels = explore_resolutions(all);
    toy = toy && levels.size() == 2 && levels[1].decomposition.q == Overlap{3, 8};
  }
  bool disjoint;
  {
    const Graph g = two_stars(5, 4, 0);
    disjoint = build_towns(extract_stars(LinkSet::all(g)), {0, 1}).towns.size() == 2;
  }
  std::mt19937_64 rng(12);
  int sets = 0, uphill = 0;
  while (sets < 100) {
    std::ostringstream text;
    const int sources = 3 + static_cast<int>(rng() % 10);
    const int papers = 10 + static_cast<int>(rng() % 40);
    for (int p = 0; p < papers; ++p)
      for (int s = 0; s < sources; ++s)
        if (rng() % 4 == 0) text << "p" << p << "\ts" << s << "\n";
    std::istringstream in(text.str());
    const Graph g = load_edge_list(in).graph;
    if (g.empty()) continue;
    std::vector<EdgeId> pick;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (rng() % 3 != 0) pick.push_back(e);
    if (pick.empty()) pick.push_back(0);
    const LinkSet l = LinkSet::of(g, pick);
    const auto stars = extract_stars(l);
    bool ok = true;
    for (const auto& level : explore_resolutions(l)) ok = ok && never_uphill(stars, level.decomposition);
    uphill += !ok;
    ++sets;
  }
  return {toy && disjoint && uphill == 0, std::string("10/8 toy ") + (toy ? "ok" : "WRONG") + ", disjoint " +
                                              (disjoint ? "ok" : "WRONG") + ", uphill in " + std::to_string(uphill) + "/100"};
}

// 7 and 9 -------------------------------------------------------------------

struct PlantedRun {
  double seconds = 0;
  double recovery = 0;
  double max_escape = 0;
  std::size_t clusters = 0;
};

fs::path planted_dir() { return g_work / "planted"; }

void write_planted_input(const PlantedGraph& p, const fs::path& file) {
  std::ofstream out(file);
  for (const auto& e : p.graph.edges()) out << bare_id(p.graph.name(e.a)) << '\t' << bare_id(p.graph.name(e.b)) << '\n';
}

RunConfig planted_config() {
  RunConfig c;
  c.input = (planted_dir() / "planted.tsv").string();
  c.out_dir = (planted_dir() / "run").string();
  c.evolution.threads = default_thread_count();
  return c;
}

// Planted communities expressed on the graph the pipeline loaded.
std::vector<LinkSet> truth_on(const Graph& g, const PlantedGraph& p) {
  std::map<std::string, std::int32_t> group_of;
  for (NodeId s : p.graph.nodes_with_role(NodeRole::source))
    group_of[p.graph.name(s)] = p.source_group[static_cast<std::size_t>(s)];
  std::vector<std::vector<EdgeId>> ids(p.communities.size());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto it = group_of.find(g.name(g.edge(e).b));
    if (it != group_of.end()) ids[static_cast<std::size_t>(it->second)].push_back(e);
  }
  std::vector<LinkSet> out;
  for (const auto& v : ids) out.push_back(LinkSet::of(g, v));
  return out;
}

PlantedRun planted_run() {
  const auto planted = generate_planted({});
  fs::remove_all(planted_dir());
  fs::create_directories(planted_dir());
  write_planted_input(planted, planted_dir() / "planted.tsv");
  const auto t0 = clk::now();
  const auto result = run_pipeline(planted_config());
  PlantedRun r;
  r.seconds = seconds_since(t0);
  r.clusters = result.clusters.size();
  r.recovery = recovery_score(result.clusters, truth_on(*result.graph, planted));
  for (const auto& c : result.clusters) r.max_escape = std::max(r.max_escape, escape_probability(c));
  std::ofstream(planted_dir() / "seconds.txt") << r.seconds << '\n';
  return r;
}

Verdict planted_recovery() {
  const auto r = planted_run();
  const double budget = 1800 * hardware_scale();
  const bool pass = r.recovery >= 0.9 && r.max_escape < 0.5 && r.seconds < budget;
  return {pass, std::to_string(r.clusters) + " final clusters, mean best-match Jaccard " + fmt(r.recovery) +
                    ", max escape probability " + fmt(r.max_escape) + ", pipeline " + fmt(r.seconds, 4) + " s of " +
                    fmt(budget, 4) + " s"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Reuses the planted run when criterion 7 already left one behind.
Verdict determinism() {
  const fs::path first = planted_dir() / "run";
  double first_seconds = 0;
  bool reuse = false;
  if (fs::exists(first / "manifest.json") && fs::exists(planted_dir() / "seconds.txt")) {
    const auto m = nlohmann::json::parse(slurp(first / "manifest.json"));
    reuse = m.value("status", "") == "ok" && m.at("config") == planted_config().to_json();
    std::ifstream(planted_dir() / "seconds.txt") >> first_seconds;
  }
  if (!reuse) first_seconds = planted_run().seconds;

  const auto manifest = nlohmann::json::parse(slurp(first / "manifest.json"));
  RunConfig again = RunConfig::from_json(manifest.at("config"));
  again.out_dir = (planted_dir() / "rerun").string();
  fs::remove_all(again.out_dir);
  const auto t0 = clk::now();
  run_pipeline(again);
  const double second_seconds = seconds_since(t0);

  std::vector<std::string> differ;
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(first)) {
    const auto name = entry.path().filename().string();
    const auto ext = entry.path().extension();
    const bool cluster_json = name == "clusters.json" || name == "final_clusters.json";
    if (ext != ".csv" && !cluster_json) continue;
    ++compared;
    if (slurp(entry.path()) != slurp(fs::path(again.out_dir) / name)) differ.push_back(name);
  }
  const double budget = 2 * 1800 * hardware_scale();
  const double total = first_seconds + second_seconds;
  std::string detail = std::to_string(compared) + " files compared, " + std::to_string(differ.size()) + " differ";
  for (const auto& d : differ) detail += " " + d;
  detail += "; runs " + fmt(first_seconds, 4) + " s + " + fmt(second_seconds, 4) + " s of " + fmt(budget, 4) + " s";
  return {compared > 0 && differ.empty() && total < budget, detail};
}

// 8 -------------------------------------------------------------------------

// Three sets over a path graph whose overlaps are 823 (all three), 8072, 858 and 2355.
Verdict table_arithmetic() {
  const double s = std::round(salton(39, 46, 47) * 100) / 100;
  const bool salton_ok = std::abs(s - 0.84) < 1e-12;

  const std::int32_t abc = 823, ab = 8072 - abc, ac = 858 - abc, bc = 2355 - abc, only = 100;
  const std::int32_t m = abc + ab + ac + bc + 3 * only;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < m; ++i) edges.push_back({i, i + 1});
  const Graph g = Graph::undirected(m + 1, edges);
  std::vector<EdgeId> l, b, br;
  EdgeId next = 0;
  auto put = [&](std::int32_t count, bool in_l, bool in_b, bool in_br) {
    for (std::int32_t k = 0; k < count; ++k, ++next) {
      if (in_l) l.push_back(next);
      if (in_b) b.push_back(next);
      if (in_br) br.push_back(next);
    }
  };
  put(abc, true, true, true);
  put(ab, true, true, false);
  put(ac, true, false, true);
  put(bc, false, true, true);
  put(only, true, false, false);
  put(only, false, true, false);
  put(only, false, false, true);
  const LinkSet L = LinkSet::of(g, l), B = LinkSet::of(g, b), BR = LinkSet::of(g, br);
  const auto t = overlap_table({L, B, BR});
  const auto triple = triple_overlap(L, B, BR);
  const bool overlap_ok = t.pairwise[0][1] == 8072 && t.pairwise[0][2] == 858 && t.pairwise[1][2] == 2355 && triple == 823 &&
                          triple <= std::min({t.pairwise[0][1], t.pairwise[0][2], t.pairwise[1][2]});

  // a 231-link cluster lying wholly in one larger set and with 215 links in another
  std::vector<EdgeId> small, holds_all, holds_215;
  for (EdgeId e = 0; e < 231; ++e) small.push_back(e);
  for (EdgeId e = 0; e < 400; ++e) holds_all.push_back(e);
  for (EdgeId e = 16; e < 500; ++e) holds_215.push_back(e);
  const auto h = poly_hierarchy({LinkSet::of(g, small), LinkSet::of(g, holds_all), LinkSet::of(g, holds_215)});
  auto has = [&](std::size_t sub, std::size_t super) {
    return std::find(h.edges.begin(), h.edges.end(), std::pair{h.class_of[sub], h.class_of[super]}) != h.edges.end();
  };
  const bool hierarchy_ok = contained_in(231, 231) && !contained_in(231, 215) && has(0, 1) && !has(0, 2);
  return {salton_ok && overlap_ok && hierarchy_ok, "Salton rounds to " + fmt(s, 2) + ", triple " + std::to_string(triple) +
                                                       " <= " + std::to_string(t.pairwise[0][2]) + "/" +
                                                       std::to_string(t.pairwise[0][1]) + "/" + std::to_string(t.pairwise[1][2]) +
                                                       ", hierarchy " + (hierarchy_ok ? "231/231 edge, 215/231 none" : "WRONG")};
}

// 10 ------------------------------------------------------------------------

Verdict scale_check() {
  PlantedSpec spec;
  spec.num_papers = 6500;
  spec.num_sources = 300;
  spec.citations_per_paper = 5;
  const auto planted = generate_planted(spec);
  const Graph& g = planted.graph;
  const auto seeds = ward_seeds(g, cocitation_projection(g), 27);
  if (seeds.empty()) return {false, "no Ward seeds"};
  EvolutionConfig cfg;
  cfg.resolution = Resolution(1, 20);
  cfg.threads = default_thread_count();
  const auto t0 = clk::now();
  const auto r = evolve(seeds.front().links, cfg);
  const double secs = seconds_since(t0);
  const double budget = 600 * hardware_scale();
  return {secs < budget, std::to_string(g.count_role(NodeRole::paper)) + " papers, " + std::to_string(g.num_edges()) +
                             " links; seed of " + std::to_string(seeds.front().links.size()) + " links evolved to " +
                             std::to_string(r.best.size()) + " in " + fmt(secs, 4) + " s of " + fmt(budget, 4) + " s"};
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds; 0 when the check reports its own
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else if (a == "--work" && i + 1 < argc) {
      g_work = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--only N] [--work DIR]\n";
      return 2;
    }
  }
  set_warnings_enabled(false);
  const double scale = hardware_scale();
  const std::vector<Criterion> all = {
      {1, "psi symmetry", 10, psi_symmetry},
      {2, "incremental moves", 10, incremental_moves},
      {3, "two-triangle landscape", 1, hand_landscape},
      {4, "oracle equivalence", 300 * scale, oracle_equivalence},
      {5, "validity monotonicity", 60 * scale, validity_monotonicity},
      {6, "town breakpoints", 10, cplc_breakpoints},
      {7, "planted recovery", 0, planted_recovery},
      {8, "table arithmetic", 1, table_arithmetic},
      {9, "determinism", 0, determinism},
      {10, "scale check", 0, scale_check},
  };
  std::cout << "hardware scale for 4-core budgets: " << scale << '\n';
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    ++ran;
    const auto t0 = clk::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.budget > 0 && secs >= c.budget) {
      o.pass = false;
      o.detail += "; over budget";
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " [" << fmt(secs, 4) << " s";
    if (c.budget > 0) std::cout << " of " << fmt(c.budget, 4) << " s";
    std::cout << "]" << std::endl;
    failed += !o.pass;
  }
  if (!ran) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return failed ? 1 : 0;
}
