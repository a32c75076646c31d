#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linkcomm/graph.hpp"
#include "linkcomm/link_set.hpp"
#include "linkcomm/projection.hpp"
#include "linkcomm/seeds.hpp"

namespace linkcomm {

struct MembershipThresholds {
  double core = 0.95;      // share > core
  double bridge = 0.05;    // share >= bridge on both sides
  double majority = 0.5;   // share > majority puts the source in S(L)
};

struct SourceShare {
  NodeId source;
  std::int32_t inside;
  std::int32_t degree;
  double share;
  bool core;
  bool majority;
};

struct ComplementPair {
  std::size_t a;
  std::size_t b;
  std::vector<NodeId> bridging;
};

struct MembershipReport {
  MembershipThresholds thresholds;
  // per cluster: every source with at least one link inside, by node id
  std::vector<std::vector<SourceShare>> shares;
  // per cluster: S(L), ascending node ids
  std::vector<std::vector<NodeId>> majority_sources;
  std::vector<ComplementPair> complementary;
};

// Share of each source's citation links inside each cluster. Complementary
// pairs among the clusters are detected and their bridging sources listed.
MembershipReport source_membership(const std::vector<LinkSet>& clusters, const Graph& g,
                                   const MembershipThresholds& thresholds = {});

// Sources with share >= bridge in L and in E - L.
std::vector<NodeId> bridging_sources(const LinkSet& l, double bridge = 0.05);

struct OverlapTable {
  std::vector<std::vector<std::int64_t>> pairwise;  // diagonal = sizes
};

// Throws std::invalid_argument for fewer than two clusters.
OverlapTable overlap_table(const std::vector<LinkSet>& clusters);
std::int64_t triple_overlap(const LinkSet& a, const LinkSet& b, const LinkSet& c);

// The smaller set sits under the larger one when less than `threshold`
// of its links lie outside it.
bool contained_in(std::int64_t small_size, std::int64_t inside_larger, double threshold = 0.05);

struct PolyHierarchy {
  // equivalence classes of mutually contained clusters; ids ascending
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  // transitively reduced edges between classes, (sub, super)
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

PolyHierarchy poly_hierarchy(const std::vector<LinkSet>& clusters, double outside_threshold = 0.05);

// Projection restricted to edges whose tail probability is at most alpha.
CoCitationProjection significance_filter(const CoCitationProjection& projection, double alpha = 0.05);

// o / sqrt(a b); 0 when either set is empty.
double salton(std::int64_t overlap, std::int64_t size_a, std::int64_t size_b);

struct DendrogramMatch {
  std::int32_t ward_cluster;
  std::int32_t ward_size;
  std::size_t link_cluster;
  std::int32_t majority_size;  // |S(L)|
  std::int32_t overlap;        // o
  double salton;
  std::int32_t symmetric_difference;
};

// For every internal Ward cluster, the link cluster whose S(L) has the
// smallest symmetric difference to it; ties by larger Salton index, then
// smaller cluster id. Leaves of the dendrogram index projection.sources.
std::vector<DendrogramMatch> match_dendrogram(const MembershipReport& membership, const Dendrogram& dendrogram,
                                              const CoCitationProjection& projection);

struct ClusterView {
  std::vector<char> node_core;     // per projection source
  std::vector<char> edge_colored;  // per projection edge
};

// Sources coloured when core; a projection edge coloured when more than
// half of its co-citing papers cite both sources through cluster links.
std::vector<ClusterView> cluster_views(const std::vector<LinkSet>& clusters, const Graph& g,
                                       const CoCitationProjection& projection, const MembershipReport& membership);

}  // namespace linkcomm
