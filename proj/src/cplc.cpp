#include "linkcomm/cplc.hpp"

#include <algorithm>
#include <stdexcept>

namespace linkcomm {

std::vector<Star> extract_stars(const LinkSet& l) {
  if (l.empty()) throw std::invalid_argument("stars need a nonempty link set");
  const Graph& g = l.graph();
  const bool bipartite = g.count_role(NodeRole::source) > 0;
  std::vector<Star> stars;
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (!l.attached(x) || (bipartite && g.role(x) != NodeRole::source)) continue;
    Star s{x, {}, {}};
    for (EdgeId e : g.incident(x)) {
      if (!l.contains(e)) continue;
      s.links.push_back(e);
      s.outer.push_back(g.other_end(e, x));
    }
    std::sort(s.links.begin(), s.links.end());
    std::sort(s.outer.begin(), s.outer.end());
    stars.push_back(std::move(s));
  }
  std::stable_sort(stars.begin(), stars.end(), [](const Star& a, const Star& b) { return a.size() > b.size(); });
  return stars;
}

TownDecomposition build_towns(const std::vector<Star>& stars, const Overlap& q) {
  if (!(q.shared >= 0 && q.shared < q.outer)) throw std::invalid_argument("q must lie in [0, 1)");
  TownDecomposition d;
  d.q = q;
  d.town_of.assign(stars.size(), -1);
  // towns whose stars so far cover each outer node
  std::vector<std::vector<std::int32_t>> cover;
  std::vector<std::int32_t> node_slot;
  auto slot = [&](NodeId x) -> std::vector<std::int32_t>& {
    if (static_cast<std::size_t>(x) >= node_slot.size()) node_slot.resize(static_cast<std::size_t>(x) + 1, -1);
    auto& s = node_slot[static_cast<std::size_t>(x)];
    if (s < 0) {
      s = static_cast<std::int32_t>(cover.size());
      cover.emplace_back();
    }
    return cover[static_cast<std::size_t>(s)];
  };
  std::vector<std::int64_t> shared;
  for (std::size_t i = 0; i < stars.size(); ++i) {
    const Star& s = stars[i];
    shared.assign(d.towns.size(), 0);
    for (NodeId x : s.outer)
      for (auto t : slot(x)) ++shared[static_cast<std::size_t>(t)];
    std::int32_t best = -1;
    for (std::size_t t = 0; t < shared.size(); ++t)
      if (best < 0 || shared[t] > shared[static_cast<std::size_t>(best)]) best = static_cast<std::int32_t>(t);
    const Overlap o{best < 0 ? 0 : shared[static_cast<std::size_t>(best)], std::max<std::int64_t>(1, s.size())};
    std::int32_t town;
    if (best >= 0 && q < o) {
      town = best;
      d.towns[static_cast<std::size_t>(town)].stars.push_back(static_cast<std::int32_t>(i));
      d.towns[static_cast<std::size_t>(town)].attached_with.push_back(o);
    } else {
      town = static_cast<std::int32_t>(d.towns.size());
      d.towns.push_back({{static_cast<std::int32_t>(i)}, {Overlap{}}});
    }
    d.town_of[i] = town;
    for (NodeId x : s.outer) {
      auto& c = slot(x);
      if (std::find(c.begin(), c.end(), town) == c.end()) c.push_back(town);
    }
  }
  return d;
}

std::vector<ResolutionLevel> explore_resolutions(const LinkSet& l) {
  const auto stars = extract_stars(l);
  std::vector<ResolutionLevel> out;
  Overlap q{0, 1};
  bool split_seen = false;
  std::size_t last_count = 0;
  while (true) {
    auto d = build_towns(stars, q);
    const bool split = stars.size() >= 2 && d.town_of[0] != d.town_of[1];
    const bool mark = split && !split_seen;
    split_seen = split_seen || split;
    if (out.empty() || d.towns.size() > last_count || mark) {
      last_count = d.towns.size();
      out.push_back({d, mark});
    }
    if (d.towns.size() == stars.size()) break;
    // the smallest attachment overlap is the next q at which that star detaches
    std::optional<Overlap> next;
    for (const auto& t : d.towns)
      for (std::size_t k = 1; k < t.attached_with.size(); ++k)
        if (t.attached_with[k].shared < t.attached_with[k].outer && (!next || t.attached_with[k] < *next))
          next = t.attached_with[k];
    // stars covered completely stay attached for every q below 1
    if (!next) break;
    q = *next;
  }
  return out;
}

bool never_uphill(const std::vector<Star>& stars, const TownDecomposition& d) {
  std::vector<char> seen(stars.size(), 0);
  for (const auto& t : d.towns) {
    if (t.stars.empty()) return false;
    std::vector<NodeId> covered;
    for (std::size_t k = 0; k < t.stars.size(); ++k) {
      const auto idx = static_cast<std::size_t>(t.stars[k]);
      if (seen[idx]) return false;
      seen[idx] = 1;
      const Star& s = stars[idx];
      if (k > 0) {
        bool linked = false;
        std::int64_t shared = 0;
        for (std::size_t j = 0; j < k; ++j) {
          const Star& earlier = stars[static_cast<std::size_t>(t.stars[j])];
          if (earlier.size() < s.size()) return false;
          std::vector<NodeId> common;
          std::set_intersection(earlier.outer.begin(), earlier.outer.end(), s.outer.begin(), s.outer.end(),
                                std::back_inserter(common));
          linked = linked || !common.empty();
        }
        for (NodeId x : s.outer) shared += std::binary_search(covered.begin(), covered.end(), x) ? 1 : 0;
        if (!linked || !(d.q < Overlap{shared, std::max<std::int64_t>(1, s.size())})) return false;
      }
      covered.insert(covered.end(), s.outer.begin(), s.outer.end());
      std::sort(covered.begin(), covered.end());
      covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::vector<Seed> town_seeds(const Graph& g, const std::vector<Star>& stars, const TownDecomposition& d,
                             const std::string& label, std::int32_t min_stars) {
  std::vector<Seed> out;
  for (std::size_t t = 0; t < d.towns.size(); ++t) {
    const auto& town = d.towns[t];
    if (static_cast<std::int32_t>(town.stars.size()) < min_stars) continue;
    LinkSet l(g);
    for (auto i : town.stars)
      for (EdgeId e : stars[static_cast<std::size_t>(i)].links)
        if (!l.contains(e)) l.add(e);
    if (l.size() == g.num_edges()) continue;
    out.push_back({std::move(l), label + " town " + std::to_string(t)});
  }
  return out;
}

}  // namespace linkcomm
