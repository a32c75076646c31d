#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "linkcomm/bench.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/memetic.hpp"

using namespace linkcomm;

namespace {

LinkSet links(const Graph& g, std::vector<EdgeId> ids) { return LinkSet::of(g, ids); }

EvolutionConfig small_config(Resolution r) {
  EvolutionConfig c;
  c.resolution = r;
  c.stagnation_limit = 10;
  c.num_evolutions = 4;
  c.population_size = 4;
  c.mutation_rate = 0.3;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  EvolutionConfig c;
  CHECK_NOTHROW(c.validate());
  c.population_size = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.mutation_rate = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.stagnation_limit = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("mutants stay connected, nonempty and proper") {
  std::mt19937_64 gen(11);
  Rng rng(5);
  std::vector<Graph> graphs;
  for (int k = 0; k < 20; ++k) graphs.push_back(fixtures::random_connected_graph(12 + k, 20 + 3 * k, gen));
  for (int trial = 0; trial < 10000; ++trial) {
    const Graph& g = graphs[static_cast<std::size_t>(trial % 20)];
    LinkSet l = largest_component(links(g, {static_cast<EdgeId>(trial % g.num_edges()), 0, 1, 2}));
    const LinkSet m = mutate(l, 0.4, rng);
    REQUIRE(!m.empty());
    REQUIRE(m.size() < g.num_edges());
    REQUIRE(is_connected(m));
  }
}

TEST_CASE("mutation toggles about rate times the candidate moves") {
  // a star keeps every removal and addition independent of the others
  std::vector<Edge> edges;
  for (NodeId leaf = 1; leaf <= 400; ++leaf) edges.push_back({0, leaf});
  const Graph g = Graph::undirected(401, edges);
  std::vector<EdgeId> half;
  for (EdgeId e = 0; e < 200; ++e) half.push_back(e);
  const LinkSet l = links(g, half);
  const auto moves = candidate_moves(l);
  REQUIRE(moves.additions.size() + moves.removals.size() == 400);
  Rng rng(17);
  const double rate = 0.05;
  double total = 0;
  const int runs = 400;
  for (int i = 0; i < runs; ++i) total += symmetric_difference_size(l, mutate(l, rate, rng));
  const double mean = total / runs;
  const double expected = rate * 400;
  const double sd = std::sqrt(400 * rate * (1 - rate) / runs);
  CHECK(std::abs(mean - expected) < 5 * sd);
}

TEST_CASE("tiny mutation rate leaves the set unchanged") {
  const Graph g = fixtures::two_triangle_bridge();
  Rng rng(2);
  const LinkSet tri = links(g, {0, 1, 2});
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += mutate(tri, 1e-9, rng) == tri;
  CHECK(same == 1000);
}

TEST_CASE("crossover examples") {
  const Graph g = fixtures::two_triangle_bridge();
  const LinkSet tri = links(g, {0, 1, 2});
  auto same = crossover(tri, tri);
  REQUIRE(same.size() == 2);
  CHECK(same[0] == tri);
  CHECK(same[1] == tri);

  // triangle+bridge and bridge+other triangle: meet {cd}, join = E dropped
  auto kids = crossover(links(g, {0, 1, 2, 3}), links(g, {3, 4, 5, 6}));
  REQUIRE(kids.size() == 1);
  CHECK(kids[0] == links(g, {3}));

  const Graph two = Graph::undirected(4, {{0, 1}, {2, 3}});
  CHECK(crossover(links(two, {0}), links(two, {1})).empty());
}

TEST_CASE("population around a single link holds the triangle") {
  const Graph g = fixtures::two_triangle_bridge();
  auto cfg = small_config({1, 3});
  Rng rng(9);
  auto pop = init_population(links(g, {0}), cfg, rng);
  REQUIRE(!pop.empty());
  CHECK(pop.front() == links(g, {0, 1, 2}));
  for (const auto& l : pop) CHECK(is_connected(l));
}

TEST_CASE("isolated component seed collapses the population") {
  const Graph g = Graph::undirected(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}});
  auto cfg = small_config({1, 3});
  Rng rng(1);
  set_warnings_enabled(false);
  auto pop = init_population(links(g, {0, 1, 2}), cfg, rng);
  set_warnings_enabled(true);
  REQUIRE(pop.size() == 1);
  CHECK(pop.front() == links(g, {0, 1, 2}));
}

TEST_CASE("evolve from every single link of the two-triangle graph") {
  const Graph g = fixtures::two_triangle_bridge();
  const LinkSet abc = links(g, {0, 1, 2}), def = links(g, {4, 5, 6});
  set_warnings_enabled(false);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto res = evolve(links(g, {e}), small_config({1, 3}));
    CHECK(res.psi.value == doctest::Approx(7.0 / 36).epsilon(1e-12));
    if (e != 3) CHECK((res.best == abc || res.best == def || res.best == complement(abc) || res.best == complement(def)));
  }
  // a valid cluster comes back unchanged
  auto res = evolve(abc, small_config({1, 3}));
  CHECK(res.best == abc);
  CHECK(res.converged);
  set_warnings_enabled(true);
}

TEST_CASE("evolve is reproducible and thread-count independent") {
  std::mt19937_64 gen(4);
  const Graph g = fixtures::random_connected_graph(40, 120, gen);
  auto cfg = small_config({1, 5});
  set_warnings_enabled(false);
  auto a = evolve(links(g, {0}), cfg);
  cfg.threads = 3;
  auto b = evolve(links(g, {0}), cfg);
  set_warnings_enabled(true);
  CHECK(a.best == b.best);
  CHECK(a.generations == b.generations);
  CHECK(a.probes == b.probes);
}

TEST_CASE("planted block comes back from a within-block seed") {
  PlantedSpec spec;
  spec.num_sources = 40;
  spec.num_papers = 400;
  spec.rng_seed = 3;
  const auto planted = generate_planted(spec);
  const auto truth = community_sets(planted);
  auto cfg = small_config({1, 20});
  cfg.mutation_rate = 0.05;
  set_warnings_enabled(false);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    auto res = evolve(truth[k], cfg);
    CHECK(jaccard(res.best, truth[k]) > 0.9);
  }
  set_warnings_enabled(true);
}

TEST_CASE("schedule survivors verify at every lower level") {
  std::mt19937_64 gen(8);
  set_warnings_enabled(false);
  for (int trial = 0; trial < 4; ++trial) {
    const Graph g = fixtures::random_connected_graph(7, 10, gen);
    std::vector<Seed> seeds;
    for (EdgeId e = 0; e < g.num_edges(); ++e) seeds.push_back({links(g, {e}), "link " + std::to_string(e)});
    const auto cfg = small_config({1, 20});
    const auto result = run_schedule(seeds, standard_schedule(), cfg);
    for (const auto* rec : result.final_clusters()) {
      CHECK(rec->valid_at.size() == result.schedule.size());
      for (const auto& r : result.schedule) {
        auto c = cfg;
        c.resolution = r;
        CHECK(evolve(rec->links, c).best == rec->links);
      }
    }
    // invalidated records carry a prefix of the schedule
    for (const auto& rec : result.records)
      if (rec.invalidated_at) CHECK(rec.valid_at.size() == *rec.invalidated_at);
  }
  set_warnings_enabled(true);
}

TEST_CASE("isolated component survives every level") {
  const Graph g = Graph::undirected(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}});
  set_warnings_enabled(false);
  const auto result = run_schedule({{links(g, {0, 1, 2}), "tri"}}, standard_schedule(), small_config({1, 20}));
  set_warnings_enabled(true);
  REQUIRE(result.final_clusters().size() == 1);
  CHECK(result.final_clusters()[0]->links == links(g, {0, 1, 2}));
  CHECK(result.final_clusters()[0]->psi.value == 0.0);
}

TEST_CASE("schedule argument checks") {
  const Graph g = fixtures::two_triangle_bridge();
  CHECK_THROWS_AS(run_schedule({}, standard_schedule(), {}), std::invalid_argument);
  CHECK_THROWS_AS(run_schedule({{links(g, {0}), "x"}}, {Resolution(1, 3), Resolution(1, 5)}, {}), std::invalid_argument);
}

TEST_CASE("secondary seeds") {
  const Graph g = Graph::undirected(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  // disjoint clusters sharing no node: union disconnected, not emitted
  auto s = derive_secondary_seeds({links(g, {0, 1, 2}), links(g, {3, 4, 5})});
  for (const auto& seed : s) CHECK(seed.label.rfind("union", 0) != 0);

  const Graph b = fixtures::two_triangle_bridge();
  SecondarySeedRules rules;
  rules.min_intersection = 1;
  auto t = derive_secondary_seeds({links(b, {0, 1, 2, 3}), links(b, {3, 4, 5, 6})}, {}, rules);
  bool meet = false;
  for (const auto& seed : t) meet = meet || (seed.label == "intersection 0,1" && seed.links == links(b, {3}));
  CHECK(meet);
}
