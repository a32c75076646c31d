#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "linkcomm/graph.hpp"
#include "linkcomm/link_set.hpp"

namespace fixtures {

using linkcomm::Edge;
using linkcomm::EdgeId;
using linkcomm::Graph;
using linkcomm::NodeId;
using Rational = boost::multiprecision::cpp_rational;

// Triangles a-b-c and d-e-f joined by the bridge c-d.
// Edge ids: 0 ab, 1 bc, 2 ca, 3 cd, 4 de, 5 ef, 6 fd.
inline Graph two_triangle_bridge() {
  return Graph::undirected(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
}

// Random connected simple graph: random spanning tree plus extra edges.
inline Graph random_connected_graph(int n, int m, std::mt19937_64& rng) {
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (a == b) return false;
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) return false;
    edges.push_back({a, b});
    return true;
  };
  for (int v = 1; v < n; ++v) add(v, static_cast<int>(rng() % static_cast<unsigned>(v)));
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  while (static_cast<long>(edges.size()) < std::min<long>(m, max_edges))
    add(static_cast<int>(rng() % static_cast<unsigned>(n)), static_cast<int>(rng() % static_cast<unsigned>(n)));
  return Graph::undirected(n, edges);
}

// Random simple graph, possibly disconnected.
inline Graph random_graph(int n, int m, std::mt19937_64& rng) {
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  while (static_cast<long>(edges.size()) < std::min<long>(m, max_edges)) {
    int a = static_cast<int>(rng() % static_cast<unsigned>(n));
    int b = static_cast<int>(rng() % static_cast<unsigned>(n));
    if (a == b || !seen.insert(std::minmax(a, b)).second) continue;
    edges.push_back({a, b});
  }
  return Graph::undirected(n, edges);
}

// Cost straight from the definition, over an explicit membership mask.
inline Rational psi_exact(const Graph& g, const std::vector<bool>& in) {
  std::vector<std::int64_t> k(static_cast<std::size_t>(g.num_nodes()), 0);
  std::int64_t links = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!in[static_cast<std::size_t>(e)]) continue;
    ++links;
    ++k[static_cast<std::size_t>(g.edge(e).a)];
    ++k[static_cast<std::size_t>(g.edge(e).b)];
  }
  Rational s = 0;
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    const std::int64_t ki = k[static_cast<std::size_t>(x)];
    const std::int64_t deg = g.degree(x);
    if (ki > 0 && ki < deg) s += Rational(ki * (deg - ki)) / deg;
  }
  const std::int64_t kin = 2 * links;
  const std::int64_t kout = 2 * (g.num_edges() - links);
  return s / kin + s / kout;
}

inline std::vector<bool> mask_of(const linkcomm::LinkSet& l) {
  std::vector<bool> in(static_cast<std::size_t>(l.graph().num_edges()), false);
  l.for_each_edge([&](EdgeId e) { in[static_cast<std::size_t>(e)] = true; });
  return in;
}

inline double to_double(const Rational& r) {
  return r.convert_to<double>();
}

}  // namespace fixtures
