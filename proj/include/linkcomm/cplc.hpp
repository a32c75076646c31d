#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkcomm/graph.hpp"
#include "linkcomm/link_set.hpp"
#include "linkcomm/memetic.hpp"

namespace linkcomm {

struct Star {
  NodeId center;
  std::vector<EdgeId> links;   // ascending
  std::vector<NodeId> outer;   // far ends of the links, ascending
  std::int32_t size() const { return static_cast<std::int32_t>(links.size()); }
};

// Relative overlap as an exact fraction shared / outer.
struct Overlap {
  std::int64_t shared = 0;
  std::int64_t outer = 1;
  double value() const { return static_cast<double>(shared) / static_cast<double>(outer); }
  friend bool operator<(const Overlap& a, const Overlap& b) { return a.shared * b.outer < b.shared * a.outer; }
  friend bool operator==(const Overlap& a, const Overlap& b) { return a.shared * b.outer == b.shared * a.outer; }
};

struct Town {
  std::vector<std::int32_t> stars;      // indices into the star list; stars[0] is the centre
  std::vector<Overlap> attached_with;   // overlap at attachment; attached_with[0] unused
};

struct TownDecomposition {
  Overlap q;
  std::vector<Town> towns;
  std::vector<std::int32_t> town_of;  // per star
};

// One star per source with links in L (every node, for graphs without
// sources), by size descending, ties by node id.
std::vector<Star> extract_stars(const LinkSet& l);

// Stars in list order; each joins the town whose stars so far share the
// largest fraction of its outer nodes, if that fraction exceeds q
// (earliest town on ties), else founds a new town.
TownDecomposition build_towns(const std::vector<Star>& stars, const Overlap& q);

struct ResolutionLevel {
  TownDecomposition decomposition;
  bool largest_split = false;  // first level where the two largest stars centre different towns
};

// Decompositions at q = 0 and at every breakpoint where the town count
// rises, up to one town per star.
std::vector<ResolutionLevel> explore_resolutions(const LinkSet& l);

// Every non-centre star reaches its centre through town stars of
// non-increasing size that share outer nodes, and attached above q.
bool never_uphill(const std::vector<Star>& stars, const TownDecomposition& d);

// Link set of each town with at least min_stars stars, as seeds.
std::vector<Seed> town_seeds(const Graph& g, const std::vector<Star>& stars, const TownDecomposition& d,
                             const std::string& label, std::int32_t min_stars = 2);

}  // namespace linkcomm
