#include "linkcomm/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "linkcomm/errors.hpp"

namespace linkcomm {

DistanceMatrix view_distance_matrix(const CoCitationProjection& projection) {
  const auto n = static_cast<std::int32_t>(projection.sources.size());
  if (n < 2) throw std::invalid_argument("need at least two sources for a distance matrix");
  std::vector<std::vector<double>> view(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (const auto& e : projection.edges) {
    view[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j)] = static_cast<double>(e.count);
    view[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i)] = static_cast<double>(e.count);
  }
  std::vector<double> norm(static_cast<std::size_t>(n), 0.0);
  DistanceMatrix m;
  m.n = n;
  m.d.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (std::int32_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : view[static_cast<std::size_t>(i)]) s += v * v;
    norm[static_cast<std::size_t>(i)] = std::sqrt(s);
    if (s == 0.0) m.zero_views.push_back(i);
  }
  if (!m.zero_views.empty())
    warn(std::to_string(m.zero_views.size()) + " source(s) are co-cited with no other source; distance 1 to all");
  for (std::int32_t i = 0; i < n; ++i) {
    for (std::int32_t j = i + 1; j < n; ++j) {
      const auto& vi = view[static_cast<std::size_t>(i)];
      const auto& vj = view[static_cast<std::size_t>(j)];
      double dot = 0.0;
      for (std::int32_t k = 0; k < n; ++k) dot += vi[static_cast<std::size_t>(k)] * vj[static_cast<std::size_t>(k)];
      const double denom = norm[static_cast<std::size_t>(i)] * norm[static_cast<std::size_t>(j)];
      const double cosine = denom > 0.0 ? std::clamp(dot / denom, 0.0, 1.0) : 0.0;
      m.at(i, j) = m.at(j, i) = 1.0 - cosine;
    }
  }
  return m;
}

Dendrogram::Dendrogram(std::int32_t num_leaves, std::vector<Merge> merges)
    : num_leaves_(num_leaves), merges_(std::move(merges)) {
  parent_.assign(static_cast<std::size_t>(num_clusters()), -1);
  for (std::size_t k = 0; k < merges_.size(); ++k) {
    const auto id = num_leaves_ + static_cast<std::int32_t>(k);
    for (auto child : {merges_[k].a, merges_[k].b}) {
      if (child < 0 || child >= id || parent_[static_cast<std::size_t>(child)] != -1)
        throw std::invalid_argument("malformed merge list");
      parent_[static_cast<std::size_t>(child)] = id;
    }
  }
}

double Dendrogram::height(std::int32_t c) const {
  return c < num_leaves_ ? 0.0 : merges_[static_cast<std::size_t>(c - num_leaves_)].height;
}

std::int32_t Dendrogram::size(std::int32_t c) const {
  return c < num_leaves_ ? 1 : merges_[static_cast<std::size_t>(c - num_leaves_)].size;
}

std::optional<std::int32_t> Dendrogram::parent(std::int32_t c) const {
  const auto p = parent_[static_cast<std::size_t>(c)];
  if (p < 0) return std::nullopt;
  return p;
}

std::vector<std::int32_t> Dendrogram::members(std::int32_t c) const {
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> stack{c};
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    if (x < num_leaves_) {
      out.push_back(x);
    } else {
      const auto& m = merges_[static_cast<std::size_t>(x - num_leaves_)];
      stack.push_back(m.a);
      stack.push_back(m.b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Generic O(n^3) agglomeration over a working matrix; `update` gives the
// new distance from k to the merged pair.
template <class Update>
Dendrogram agglomerate(const DistanceMatrix& m, bool square_input, Update update) {
  const std::int32_t n = m.n;
  if (n < 2) throw std::invalid_argument("need at least two items to cluster");
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (std::int32_t i = 0; i < n; ++i)
    for (std::int32_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = square_input ? v * v : v;
    }
  std::vector<std::int32_t> id(static_cast<std::size_t>(n));
  std::vector<std::int32_t> size(static_cast<std::size_t>(n), 1);
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  for (std::int32_t i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;

  std::vector<Merge> merges;
  for (std::int32_t step = 0; step < n - 1; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t bi = -1, bj = -1;
    for (std::int32_t i = 0; i < n; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (std::int32_t j = i + 1; j < n; ++j) {
        if (!alive[static_cast<std::size_t>(j)]) continue;
        const double v = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    const auto si = size[static_cast<std::size_t>(bi)], sj = size[static_cast<std::size_t>(bj)];
    for (std::int32_t k = 0; k < n; ++k) {
      if (!alive[static_cast<std::size_t>(k)] || k == bi || k == bj) continue;
      const double v = update(d[static_cast<std::size_t>(k)][static_cast<std::size_t>(bi)],
                              d[static_cast<std::size_t>(k)][static_cast<std::size_t>(bj)], best, si, sj,
                              size[static_cast<std::size_t>(k)]);
      d[static_cast<std::size_t>(k)][static_cast<std::size_t>(bi)] = d[static_cast<std::size_t>(bi)][static_cast<std::size_t>(k)] = v;
    }
    merges.push_back({id[static_cast<std::size_t>(bi)], id[static_cast<std::size_t>(bj)], best, si + sj});
    id[static_cast<std::size_t>(bi)] = n + step;
    size[static_cast<std::size_t>(bi)] = si + sj;
    alive[static_cast<std::size_t>(bj)] = 0;
  }
  return Dendrogram(n, std::move(merges));
}

}  // namespace

Dendrogram ward_dendrogram(const DistanceMatrix& m) {
  return agglomerate(m, true, [](double dki, double dkj, double dij, std::int32_t ni, std::int32_t nj, std::int32_t nk) {
    const double t = ni + nj + nk;
    return ((ni + nk) * dki + (nj + nk) * dkj - nk * dij) / t;
  });
}

Dendrogram single_linkage_dendrogram(const DistanceMatrix& m) {
  return agglomerate(m, false, [](double dki, double dkj, double, std::int32_t, std::int32_t, std::int32_t) {
    return std::min(dki, dkj);
  });
}

std::vector<Branch> select_long_branch_clusters(const Dendrogram& d, std::int32_t count, const BranchOptions& options) {
  auto size_class = [&](std::int32_t size) {
    if (!options.geometric_classes) return size;
    std::int32_t c = 0;
    while ((2 << c) <= size) ++c;
    return c;
  };
  std::map<std::int32_t, std::vector<Branch>> classes;
  for (std::int32_t c = d.num_leaves(); c < d.root(); ++c) {
    const auto p = d.parent(c);
    if (!p) continue;
    classes[size_class(d.size(c))].push_back({c, d.size(c), d.height(*p) - d.height(c)});
  }
  auto longer = [](const Branch& x, const Branch& y) {
    if (x.branch_length != y.branch_length) return x.branch_length > y.branch_length;
    if (x.size != y.size) return x.size < y.size;
    return x.cluster < y.cluster;
  };
  std::vector<Branch> kept;
  for (auto& [cls, list] : classes) {
    std::sort(list.begin(), list.end(), longer);
    for (std::size_t i = 0; i < list.size() && static_cast<std::int32_t>(i) < options.ranks_per_class; ++i)
      kept.push_back(list[i]);
  }
  std::sort(kept.begin(), kept.end(), longer);
  if (static_cast<std::int32_t>(kept.size()) < count)
    warn("requested " + std::to_string(count) + " long-branch clusters, only " + std::to_string(kept.size()) +
         " available");
  if (static_cast<std::int32_t>(kept.size()) > count) kept.resize(static_cast<std::size_t>(std::max(count, 0)));
  return kept;
}

LinkSet seed_links_for_sources(const std::vector<NodeId>& sources, const Graph& g) {
  if (sources.empty()) throw std::invalid_argument("seed needs at least one source");
  LinkSet l(g);
  for (NodeId s : sources)
    for (EdgeId e : g.incident(s))
      if (!l.contains(e)) l.add(e);
  if (l.empty()) throw DomainError("listed sources have no citation links");
  if (!is_connected(l)) {
    warn("seed links are disconnected; keeping the largest component");
    return largest_component(l);
  }
  return l;
}

std::vector<Seed> ward_seeds(const Graph& g, const CoCitationProjection& projection, std::int32_t count,
                             const BranchOptions& options) {
  const auto dendrogram = ward_dendrogram(view_distance_matrix(projection));
  std::vector<Seed> out;
  for (const auto& b : select_long_branch_clusters(dendrogram, count, options)) {
    std::vector<NodeId> sources;
    for (auto leaf : dendrogram.members(b.cluster)) sources.push_back(projection.sources[static_cast<std::size_t>(leaf)]);
    LinkSet l = seed_links_for_sources(sources, g);
    if (l.size() == g.num_edges()) continue;
    out.push_back({std::move(l), "ward " + std::to_string(b.cluster)});
  }
  return out;
}

}  // namespace linkcomm
