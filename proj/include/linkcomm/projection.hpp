#pragma once

#include <cstdint>
#include <vector>

#include "linkcomm/graph.hpp"

namespace linkcomm {

struct CoCitationEdge {
  std::int32_t i = 0;  // indices into CoCitationProjection::sources, i < j
  std::int32_t j = 0;
  std::int64_t count = 0;   // papers citing both
  double expected = 0.0;    // n_i n_j / N under independent citation
  double p_value = 1.0;     // P(X >= count), X hypergeometric
  bool significant = false;

  double weight() const { return static_cast<double>(count) - expected; }
};

struct CoCitationProjection {
  std::vector<NodeId> sources;            // graph node ids, ascending
  std::vector<std::int64_t> citations;    // n_i per source
  std::int64_t num_papers = 0;            // N
  double alpha = 0.05;
  std::vector<CoCitationEdge> edges;      // sorted by (i, j)
};

// Upper tail P(X >= observed) of the number of papers citing both sources
// when n_i and n_j citing papers are drawn independently from N.
double cocitation_tail_probability(std::int64_t observed, std::int64_t n_i, std::int64_t n_j,
                                   std::int64_t num_papers);

// Every source pair co-cited at least once becomes an edge; significance
// is flagged at the given level.
CoCitationProjection cocitation_projection(const Graph& g, double alpha = 0.05);

}  // namespace linkcomm
