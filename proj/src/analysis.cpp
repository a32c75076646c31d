#include "linkcomm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace linkcomm {

namespace {

std::vector<NodeId> membership_nodes(const Graph& g) {
  auto sources = g.nodes_with_role(NodeRole::source);
  if (!sources.empty()) return sources;
  std::vector<NodeId> all(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId x = 0; x < g.num_nodes(); ++x) all[static_cast<std::size_t>(x)] = x;
  return all;
}

bool complementary(const LinkSet& a, const LinkSet& b) {
  return a.size() + b.size() == a.graph().num_edges() && intersection_size(a, b) == 0;
}

}  // namespace

std::vector<NodeId> bridging_sources(const LinkSet& l, double bridge) {
  const Graph& g = l.graph();
  std::vector<NodeId> out;
  for (NodeId x : membership_nodes(g)) {
    const double d = g.degree(x);
    if (d == 0) continue;
    const double inside = l.internal_degree(x) / d;
    if (inside >= bridge && 1.0 - inside >= bridge) out.push_back(x);
  }
  return out;
}

MembershipReport source_membership(const std::vector<LinkSet>& clusters, const Graph& g,
                                   const MembershipThresholds& thresholds) {
  MembershipReport report;
  report.thresholds = thresholds;
  const auto nodes = membership_nodes(g);
  for (const auto& l : clusters) {
    std::vector<SourceShare> shares;
    std::vector<NodeId> majority;
    for (NodeId x : nodes) {
      const auto inside = l.internal_degree(x);
      if (inside == 0) continue;
      const double share = static_cast<double>(inside) / static_cast<double>(g.degree(x));
      const bool is_majority = share > thresholds.majority;
      shares.push_back({x, inside, g.degree(x), share, share > thresholds.core, is_majority});
      if (is_majority) majority.push_back(x);
    }
    report.shares.push_back(std::move(shares));
    report.majority_sources.push_back(std::move(majority));
  }
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = a + 1; b < clusters.size(); ++b)
      if (complementary(clusters[a], clusters[b]))
        report.complementary.push_back({a, b, bridging_sources(clusters[a], thresholds.bridge)});
  return report;
}

OverlapTable overlap_table(const std::vector<LinkSet>& clusters) {
  if (clusters.size() < 2) throw std::invalid_argument("overlap table needs at least two clusters");
  OverlapTable t;
  t.pairwise.assign(clusters.size(), std::vector<std::int64_t>(clusters.size(), 0));
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = a; b < clusters.size(); ++b)
      t.pairwise[a][b] = t.pairwise[b][a] = intersection_size(clusters[a], clusters[b]);
  return t;
}

std::int64_t triple_overlap(const LinkSet& a, const LinkSet& b, const LinkSet& c) {
  return intersection_size(set_intersection(a, b), c);
}

bool contained_in(std::int64_t small_size, std::int64_t inside_larger, double threshold) {
  if (small_size <= 0) return false;
  return static_cast<double>(small_size - inside_larger) / static_cast<double>(small_size) < threshold;
}

PolyHierarchy poly_hierarchy(const std::vector<LinkSet>& clusters, double outside_threshold) {
  if (clusters.size() < 2) throw std::invalid_argument("poly-hierarchy needs at least two clusters");
  const std::size_t n = clusters.size();
  std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && clusters[i].size() <= clusters[j].size() &&
          contained_in(clusters[i].size(), intersection_size(clusters[i], clusters[j]), outside_threshold))
        edge[i][j] = 1;
  // reachability; mutually reachable clusters form one class
  auto reach = edge;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  PolyHierarchy h;
  h.class_of.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (h.class_of[i] != n) continue;
    const std::size_t c = h.classes.size();
    h.classes.push_back({i});
    h.class_of[i] = c;
    for (std::size_t j = i + 1; j < n; ++j)
      if (reach[i][j] && reach[j][i]) {
        h.classes[c].push_back(j);
        h.class_of[j] = c;
      }
  }
  const std::size_t m = h.classes.size();
  std::vector<std::vector<char>> up(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && h.class_of[i] != h.class_of[j]) up[h.class_of[i]][h.class_of[j]] = 1;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (!up[a][b]) continue;
      bool implied = false;
      for (std::size_t c = 0; c < m && !implied; ++c) implied = c != a && c != b && up[a][c] && up[c][b];
      if (!implied) h.edges.push_back({a, b});
    }
  return h;
}

CoCitationProjection significance_filter(const CoCitationProjection& projection, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  CoCitationProjection out = projection;
  out.alpha = alpha;
  out.edges.clear();
  for (auto e : projection.edges) {
    if (e.count <= 0 || e.p_value > alpha) continue;
    e.significant = true;
    out.edges.push_back(e);
  }
  return out;
}

double salton(std::int64_t overlap, std::int64_t size_a, std::int64_t size_b) {
  if (size_a <= 0 || size_b <= 0) return 0.0;
  return static_cast<double>(overlap) / std::sqrt(static_cast<double>(size_a) * static_cast<double>(size_b));
}

std::vector<DendrogramMatch> match_dendrogram(const MembershipReport& membership, const Dendrogram& dendrogram,
                                              const CoCitationProjection& projection) {
  std::vector<DendrogramMatch> out;
  if (membership.majority_sources.empty()) return out;
  for (std::int32_t c = dendrogram.num_leaves(); c < dendrogram.root(); ++c) {
    std::vector<NodeId> w;
    for (auto leaf : dendrogram.members(c)) w.push_back(projection.sources[static_cast<std::size_t>(leaf)]);
    std::sort(w.begin(), w.end());
    std::optional<DendrogramMatch> best;
    for (std::size_t k = 0; k < membership.majority_sources.size(); ++k) {
      const auto& s = membership.majority_sources[k];
      std::vector<NodeId> common;
      std::set_intersection(s.begin(), s.end(), w.begin(), w.end(), std::back_inserter(common));
      const auto o = static_cast<std::int32_t>(common.size());
      DendrogramMatch m{c,
                        static_cast<std::int32_t>(w.size()),
                        k,
                        static_cast<std::int32_t>(s.size()),
                        o,
                        salton(o, static_cast<std::int64_t>(s.size()), static_cast<std::int64_t>(w.size())),
                        static_cast<std::int32_t>(s.size() + w.size()) - 2 * o};
      if (!best || m.symmetric_difference < best->symmetric_difference ||
          (m.symmetric_difference == best->symmetric_difference && m.salton > best->salton))
        best = m;
    }
    out.push_back(*best);
  }
  return out;
}

std::vector<ClusterView> cluster_views(const std::vector<LinkSet>& clusters, const Graph& g,
                                       const CoCitationProjection& projection, const MembershipReport& membership) {
  std::vector<std::int32_t> index(static_cast<std::size_t>(g.num_nodes()), -1);
  for (std::size_t i = 0; i < projection.sources.size(); ++i)
    index[static_cast<std::size_t>(projection.sources[i])] = static_cast<std::int32_t>(i);
  const auto n = static_cast<std::int64_t>(projection.sources.size());
  std::unordered_map<std::int64_t, std::size_t> edge_at;
  for (std::size_t e = 0; e < projection.edges.size(); ++e)
    edge_at[projection.edges[e].i * n + projection.edges[e].j] = e;

  std::vector<ClusterView> out;
  std::vector<std::int32_t> cited;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const LinkSet& l = clusters[k];
    ClusterView v;
    v.node_core.assign(projection.sources.size(), 0);
    v.edge_colored.assign(projection.edges.size(), 0);
    for (const auto& s : membership.shares[k]) {
      const auto i = index[static_cast<std::size_t>(s.source)];
      if (i >= 0 && s.core) v.node_core[static_cast<std::size_t>(i)] = 1;
    }
    std::vector<std::int64_t> inside(projection.edges.size(), 0);
    for (NodeId p = 0; p < g.num_nodes(); ++p) {
      if (g.role(p) != NodeRole::paper || l.internal_degree(p) < 2) continue;
      cited.clear();
      for (EdgeId e : g.incident(p))
        if (l.contains(e)) cited.push_back(index[static_cast<std::size_t>(g.other_end(e, p))]);
      std::sort(cited.begin(), cited.end());
      for (std::size_t a = 0; a < cited.size(); ++a)
        for (std::size_t b = a + 1; b < cited.size(); ++b) {
          auto it = edge_at.find(cited[a] * n + cited[b]);
          if (it != edge_at.end()) ++inside[it->second];
        }
    }
    for (std::size_t e = 0; e < projection.edges.size(); ++e)
      v.edge_colored[e] = 2 * inside[e] > projection.edges[e].count;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace linkcomm
