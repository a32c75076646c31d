#include "linkcomm/bench.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "linkcomm/errors.hpp"
#include "linkcomm/rng.hpp"

namespace linkcomm {

void PlantedSpec::validate() const {
  if (num_groups < 2) throw std::invalid_argument("need at least two groups");
  if (citations_per_paper < 2) throw std::invalid_argument("need at least two citations per paper");
  if (num_papers < 1) throw std::invalid_argument("need at least one paper");
  if (!(mixing >= 0.0 && mixing < 0.5)) throw std::invalid_argument("mixing must lie in [0, 0.5)");
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) throw std::invalid_argument("overlap fraction must lie in [0, 1]");
  const std::int32_t smallest_group = num_sources / num_groups;
  if (citations_per_paper > smallest_group)
    throw std::invalid_argument("citations per paper exceed the sources of a group");
  const std::int32_t largest_group = (num_sources + num_groups - 1) / num_groups;
  const std::int32_t smallest_outside = num_sources - (overlap_fraction > 0.0 ? 2 : 1) * largest_group;
  if (mixing > 0.0 && citations_per_paper > smallest_outside)
    throw std::invalid_argument("citations per paper exceed the sources outside a paper's groups");
}

PlantedGraph generate_planted(const PlantedSpec& spec) {
  spec.validate();
  Rng rng(derive_seed({spec.rng_seed, 0x706c616e74ULL}));
  const std::int32_t g = spec.num_groups;
  std::vector<std::int32_t> group_begin(static_cast<std::size_t>(g) + 1, 0);
  for (std::int32_t k = 0; k < g; ++k)
    group_begin[static_cast<std::size_t>(k) + 1] =
        group_begin[static_cast<std::size_t>(k)] + spec.num_sources / g + (k < spec.num_sources % g ? 1 : 0);
  auto group_of = [&](std::int32_t s) {
    return static_cast<std::int32_t>(std::upper_bound(group_begin.begin(), group_begin.end(), s) - group_begin.begin()) - 1;
  };

  std::vector<CitationRecord> records;
  std::vector<std::int32_t> chosen;
  for (std::int32_t p = 0; p < spec.num_papers; ++p) {
    std::vector<std::int32_t> groups{static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(g)))};
    if (rng.bernoulli(spec.overlap_fraction)) {
      auto other = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(g - 1)));
      groups.push_back(other >= groups[0] ? other + 1 : other);
    }
    auto assigned = [&](std::int32_t s) { return std::find(groups.begin(), groups.end(), group_of(s)) != groups.end(); };
    chosen.clear();
    while (static_cast<std::int32_t>(chosen.size()) < spec.citations_per_paper) {
      std::int32_t s;
      if (!rng.bernoulli(spec.mixing)) {
        const auto k = groups[rng.below(groups.size())];
        const auto lo = group_begin[static_cast<std::size_t>(k)];
        const auto hi = group_begin[static_cast<std::size_t>(k) + 1];
        s = lo + static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(hi - lo)));
      } else {
        do s = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(spec.num_sources)));
        while (assigned(s));
      }
      if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) continue;
      chosen.push_back(s);
      records.push_back({"p" + std::to_string(p), "s" + std::to_string(s)});
    }
  }

  auto loaded = build_citation_graph(records);
  auto pruned = prune_single_citers(loaded.graph);
  PlantedGraph out;
  out.graph = std::move(pruned.graph);
  out.communities.resize(static_cast<std::size_t>(g));
  out.source_group.assign(static_cast<std::size_t>(out.graph.num_nodes()), -1);
  for (NodeId x = 0; x < out.graph.num_nodes(); ++x)
    if (out.graph.role(x) == NodeRole::source)
      out.source_group[static_cast<std::size_t>(x)] = group_of(std::stoi(std::string(bare_id(out.graph.name(x)).substr(1))));
  for (EdgeId e = 0; e < out.graph.num_edges(); ++e) {
    const auto k = out.source_group[static_cast<std::size_t>(out.graph.edge(e).b)];
    out.communities[static_cast<std::size_t>(k)].push_back(e);
  }
  return out;
}

std::vector<LinkSet> community_sets(const PlantedGraph& planted) {
  std::vector<LinkSet> out;
  for (const auto& c : planted.communities) out.push_back(LinkSet::of(planted.graph, c));
  return out;
}

namespace {
void check_oracle_size(const Graph& g) {
  if (g.num_edges() > kMaxOracleEdges)
    throw DomainError("exhaustive enumeration is limited to " + std::to_string(kMaxOracleEdges) + " links, graph has " +
                      std::to_string(g.num_edges()));
}

// Scaled cost: sigma * lcm(degrees) / (k_in k_out) keeps everything integral.
struct Scorer {
  const Graph& g;
  std::int64_t lcm = 1;
  explicit Scorer(const Graph& graph) : g(graph) {
    for (NodeId x = 0; x < g.num_nodes(); ++x)
      if (g.degree(x) > 0) lcm = std::lcm(lcm, static_cast<std::int64_t>(g.degree(x)));
  }
  ExactCost cost(std::uint32_t mask) const {
    std::vector<std::int64_t> k(static_cast<std::size_t>(g.num_nodes()), 0);
    std::int64_t links = 0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!(mask >> e & 1U)) continue;
      ++links;
      ++k[static_cast<std::size_t>(g.edge(e).a)];
      ++k[static_cast<std::size_t>(g.edge(e).b)];
    }
    std::int64_t s = 0;
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
      const std::int64_t d = g.degree(x);
      if (d > 0) s += k[static_cast<std::size_t>(x)] * (d - k[static_cast<std::size_t>(x)]) * (lcm / d);
    }
    return {s, (2 * links) * (2 * (g.num_edges() - links))};
  }
};

bool connected_mask(const Graph& g, std::uint32_t mask) {
  if (!mask) return false;
  std::uint32_t reached = mask & (~mask + 1);
  bool grew = true;
  while (grew) {
    grew = false;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!(mask >> e & 1U) || (reached >> e & 1U)) continue;
      for (EdgeId f = 0; f < g.num_edges(); ++f) {
        if (!(reached >> f & 1U)) continue;
        const Edge& x = g.edge(e);
        const Edge& y = g.edge(f);
        if (x.a == y.a || x.a == y.b || x.b == y.a || x.b == y.b) {
          reached |= 1U << e;
          grew = true;
          break;
        }
      }
    }
  }
  return reached == mask;
}
}  // namespace

bool cost_less(const ExactCost& a, const ExactCost& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

ExactCost brute_force_cost(const Graph& g, std::uint32_t mask) {
  check_oracle_size(g);
  const std::uint32_t full = (1U << g.num_edges()) - 1;
  if (mask == 0 || mask == full) throw DomainError("cost undefined for the empty or full link set");
  return Scorer(g).cost(mask);
}

std::vector<LinkSet> brute_force_valid_clusters(const Graph& g, const Resolution& r) {
  check_oracle_size(g);
  const int m = g.num_edges();
  std::vector<LinkSet> out;
  if (m < 2) return out;
  const std::uint32_t full = (1U << m) - 1;
  Scorer scorer(g);
  std::vector<ExactCost> cost(static_cast<std::size_t>(full) + 1, ExactCost{0, 1});
  for (std::uint32_t mask = 1; mask < full; ++mask) cost[mask] = scorer.cost(mask);

  // flip patterns grouped by size
  std::vector<std::vector<std::uint32_t>> flips_of_size(static_cast<std::size_t>(m) + 1);
  for (std::uint32_t f = 1; f <= full; ++f) flips_of_size[static_cast<std::size_t>(std::popcount(f))].push_back(f);

  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (!connected_mask(g, mask)) continue;
    const auto radius = r.radius(std::popcount(mask));
    bool valid = true;
    for (std::int64_t d = 1; d <= radius && d <= m && valid; ++d) {
      for (std::uint32_t f : flips_of_size[static_cast<std::size_t>(d)]) {
        const std::uint32_t other = mask ^ f;
        if (other == 0 || other == full) continue;
        if (cost_less(cost[other], cost[mask])) {
          valid = false;
          break;
        }
      }
    }
    if (!valid) continue;
    LinkSet l(g);
    for (EdgeId e = 0; e < m; ++e)
      if (mask >> e & 1U) l.add(e);
    out.push_back(std::move(l));
  }
  return out;
}

double jaccard(const LinkSet& a, const LinkSet& b) {
  const auto inter = intersection_size(a, b);
  const auto uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double recovery_score(const std::vector<LinkSet>& found, const std::vector<LinkSet>& planted) {
  if (planted.empty()) throw std::invalid_argument("recovery score needs planted sets");
  if (found.empty()) return 0.0;
  double total = 0.0;
  for (const auto& p : planted) {
    double best = 0.0;
    for (const auto& f : found) best = std::max(best, jaccard(f, p));
    total += best;
  }
  return total / static_cast<double>(planted.size());
}

}  // namespace linkcomm
