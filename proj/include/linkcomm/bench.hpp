#pragma once

#include <cstdint>
#include <vector>

#include "linkcomm/graph.hpp"
#include "linkcomm/link_set.hpp"
#include "linkcomm/resolution.hpp"

namespace linkcomm {

struct PlantedSpec {
  std::int32_t num_sources = 300;
  std::int32_t num_groups = 4;
  std::int32_t num_papers = 3000;
  std::int32_t citations_per_paper = 8;
  double mixing = 0.1;            // chance a citation leaves the paper's groups
  double overlap_fraction = 0.0;  // papers assigned to two groups
  std::uint64_t rng_seed = 1;

  // Throws std::invalid_argument for infeasible or out-of-range specs.
  void validate() const;
};

struct PlantedGraph {
  Graph graph;
  std::vector<std::vector<EdgeId>> communities;  // group k: links to its sources
  std::vector<std::int32_t> source_group;        // per node; -1 for papers
};

// Sources split evenly into groups (remainder to the first groups); each
// paper draws its citations without replacement, from its own group(s)
// with probability 1 - mixing, else from the other groups. Papers citing
// fewer than two sources are pruned afterwards.
PlantedGraph generate_planted(const PlantedSpec& spec);

std::vector<LinkSet> community_sets(const PlantedGraph& planted);

// Exact cost as the fraction num/den (a positive multiple of the true
// value common to all sets of one graph), for exhaustive comparisons.
struct ExactCost {
  std::int64_t num;
  std::int64_t den;
};
inline constexpr int kMaxOracleEdges = 14;

// Every connected, nonempty, proper link set L with no cheaper set (any
// set, connected or not) within ceil(r |L|) flips. Refuses m > 14.
std::vector<LinkSet> brute_force_valid_clusters(const Graph& g, const Resolution& r);

// Exact cost of the link set given by the bitmask; m <= 14.
ExactCost brute_force_cost(const Graph& g, std::uint32_t mask);
bool cost_less(const ExactCost& a, const ExactCost& b);

double jaccard(const LinkSet& a, const LinkSet& b);
// Mean over planted sets of the best Jaccard index among found sets.
double recovery_score(const std::vector<LinkSet>& found, const std::vector<LinkSet>& planted);

}  // namespace linkcomm
