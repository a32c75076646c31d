#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/psi.hpp"
#include "linkcomm/resolution.hpp"

using namespace linkcomm;

TEST_CASE("edge list loading") {
  std::istringstream in("# header\np1\ts1\np1\ts2\n\np2\ts1\np1\ts1\n");
  auto res = load_edge_list(in);
  CHECK(res.duplicates == 1);
  CHECK(res.graph.num_edges() == 3);
  CHECK(res.graph.count_role(NodeRole::paper) == 2);
  CHECK(res.graph.count_role(NodeRole::source) == 2);
  auto s1 = res.graph.find("source:s1");
  REQUIRE(s1);
  CHECK(res.graph.degree(*s1) == 2);
}

TEST_CASE("edge list parse errors carry the line") {
  std::istringstream in("p1\ts1\nbroken line\n");
  try {
    load_edge_list(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("same id as paper and source stays two nodes") {
  std::istringstream in("x\ty\nz\tx\n");
  auto res = load_edge_list(in);
  CHECK(res.graph.num_nodes() == 4);
}

TEST_CASE("pruning drops single citers and orphaned sources") {
  std::istringstream in("p1\ts1\np1\ts2\np2\ts3\np3\ts1\np3\ts2\n");
  auto g = load_edge_list(in).graph;
  auto pr = prune_single_citers(g);
  CHECK(pr.removed_papers == 1);
  CHECK(pr.removed_sources == 1);
  CHECK(pr.graph.num_edges() == 4);
  CHECK_FALSE(pr.empty);
  for (EdgeId e = 0; e < pr.graph.num_edges(); ++e) {
    const auto& ne = pr.graph.edge(e);
    const auto& oe = g.edge(pr.original_edge[static_cast<std::size_t>(e)]);
    CHECK(pr.graph.name(ne.a) == g.name(oe.a));
    CHECK(pr.graph.name(ne.b) == g.name(oe.b));
  }
}

TEST_CASE("pruning to nothing is flagged") {
  set_warnings_enabled(false);
  std::istringstream in("p1\ts1\np2\ts2\n");
  auto pr = prune_single_citers(load_edge_list(in).graph);
  CHECK(pr.empty);
  CHECK(pr.graph.num_edges() == 0);
  set_warnings_enabled(true);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph::undirected(2, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::undirected(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::undirected(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("triangle cost is 7/36") {
  auto g = fixtures::two_triangle_bridge();
  std::vector<EdgeId> tri{0, 1, 2};
  auto l = LinkSet::of(g, tri);
  auto score = psi(l);
  CHECK(score.sigma == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(score.k_in == 6);
  CHECK(score.k_in_complement == 8);
  CHECK(std::abs(score.value - 7.0 / 36.0) <= 1e-15);
  CHECK(fixtures::psi_exact(g, fixtures::mask_of(l)) == fixtures::Rational(7, 36));
}

TEST_CASE("single link of the triangle") {
  // a and b each have one of two links inside: sigma = 1/2 + 1/2, k_in 2, complement 12.
  auto g = fixtures::two_triangle_bridge();
  std::vector<EdgeId> ab{0};
  auto l = LinkSet::of(g, ab);
  CHECK(fixtures::psi_exact(g, fixtures::mask_of(l)) == fixtures::Rational(1, 2) + fixtures::Rational(1, 12));
  CHECK(std::abs(psi(l).value - (0.5 + 1.0 / 12.0)) < 1e-15);
}

TEST_CASE("isolated component costs zero") {
  auto g = Graph::undirected(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  std::vector<EdgeId> left{0, 1};
  auto l = LinkSet::of(g, left);
  CHECK(psi(l).value == 0.0);
  CHECK(escape_probability(l) == 0.0);
  CHECK(is_weak_community(l));
}

TEST_CASE("cost domain errors") {
  auto g = fixtures::two_triangle_bridge();
  CHECK_THROWS_AS(psi(LinkSet(g)), DomainError);
  CHECK_THROWS_AS(psi(LinkSet::all(g)), DomainError);
  CHECK_THROWS_AS(escape_probability(LinkSet(g)), DomainError);
  std::vector<EdgeId> ab{0};
  auto l = LinkSet::of(g, ab);
  CHECK_THROWS_AS(psi_after_move(l, 4, Move::add), ContractError);
  CHECK_THROWS_AS(psi_after_move(l, 1, Move::remove), ContractError);
  CHECK_THROWS_AS(psi_after_move(l, 0, Move::add), ContractError);
  CHECK_THROWS_AS(psi_after_move(l, 0, Move::remove), DomainError);
}

TEST_CASE("cost matches the exact oracle and is complement symmetric") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = fixtures::random_graph(12 + trial % 7, 25 + trial, rng);
    LinkSet l(g);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (rng() % 2) l.add(e);
    if (l.empty() || l.size() == g.num_edges()) continue;
    const double expected = fixtures::to_double(fixtures::psi_exact(g, fixtures::mask_of(l)));
    CHECK(std::abs(psi(l).value - expected) <= 1e-12);
    CHECK(psi(l).value == psi(complement(l)).value);
    CHECK(l.cache_consistent());
  }
}

TEST_CASE("incremental moves agree with recomputation") {
  std::mt19937_64 rng(11);
  auto g = fixtures::random_connected_graph(30, 80, rng);
  std::vector<EdgeId> start{0};
  auto l = LinkSet::of(g, start);
  for (int step = 0; step < 2000; ++step) {
    const EdgeId e = static_cast<EdgeId>(rng() % static_cast<unsigned>(g.num_edges()));
    const Edge& ed = g.edge(e);
    Move mv = l.contains(e) ? Move::remove : Move::add;
    if (mv == Move::add && !l.attached(ed.a) && !l.attached(ed.b)) continue;
    const auto size_after = l.size() + (mv == Move::add ? 1 : -1);
    if (size_after == 0 || size_after == g.num_edges()) continue;
    const auto predicted = psi_after_move(l, e, mv);
    l.toggle(e);
    CHECK(std::abs(predicted.value - psi(l).value) <= 1e-12);
  }
  CHECK(l.cache_consistent());
}

TEST_CASE("set algebra and components") {
  auto g = fixtures::two_triangle_bridge();
  std::vector<EdgeId> a{0, 1, 2, 3};
  std::vector<EdgeId> b{3, 4, 5, 6};
  auto la = LinkSet::of(g, a);
  auto lb = LinkSet::of(g, b);
  CHECK(intersection_size(la, lb) == 1);
  CHECK(symmetric_difference_size(la, lb) == 6);
  CHECK(set_union(la, lb).size() == 7);
  CHECK(set_intersection(la, lb).edges() == std::vector<EdgeId>{3});
  CHECK(set_difference(la, lb).edges() == std::vector<EdgeId>{0, 1, 2});
  CHECK(complement(la) == LinkSet::of(g, std::vector<EdgeId>{4, 5, 6}));
  CHECK_THROWS_AS(complement(LinkSet(g)), DomainError);

  std::vector<EdgeId> split{0, 1, 5};
  auto ls = LinkSet::of(g, split);
  CHECK_FALSE(is_connected(ls));
  auto comps = components(ls);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].edges() == std::vector<EdgeId>{0, 1});
  CHECK(largest_component(ls) == comps[0]);
  CHECK_FALSE(is_connected(LinkSet(g)));
  CHECK(is_connected(la));
}

TEST_CASE("fingerprints follow set identity") {
  auto g = fixtures::two_triangle_bridge();
  LinkSet x(g), y(g);
  x.add(0);
  x.add(4);
  y.add(4);
  y.add(0);
  CHECK(x.fingerprint() == y.fingerprint());
  y.remove(4);
  CHECK_FALSE(x.fingerprint() == y.fingerprint());
}

TEST_CASE("resolution parsing and radius") {
  auto r = Resolution::parse("1/3");
  CHECK(r.radius(1) == 1);
  CHECK(r.radius(3) == 1);
  CHECK(r.radius(4) == 2);
  CHECK(Resolution::parse("0.25") == Resolution(1, 4));
  CHECK(Resolution::parse("2/6") == Resolution(1, 3));
  CHECK_THROWS(Resolution::parse("1/1"));
  CHECK_THROWS(Resolution::parse("abc"));
  auto s = parse_schedule("1/20,1/10,1/5,1/4,1/3");
  CHECK(s == standard_schedule());
  CHECK_THROWS(parse_schedule("1/3,1/4"));
  CHECK(schedule_str(s) == "1/20,1/10,1/5,1/4,1/3");
}
