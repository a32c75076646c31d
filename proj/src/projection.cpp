#include "linkcomm/projection.hpp"

#include <algorithm>
#include <boost/math/distributions/hypergeometric.hpp>
#include <map>
#include <stdexcept>

namespace linkcomm {

double cocitation_tail_probability(std::int64_t observed, std::int64_t n_i, std::int64_t n_j,
                                   std::int64_t num_papers) {
  if (n_i > num_papers || n_j > num_papers || n_i < 0 || n_j < 0)
    throw std::invalid_argument("citation counts exceed the number of papers");
  const std::int64_t lo = std::max<std::int64_t>(0, n_i + n_j - num_papers);
  if (observed <= lo) return 1.0;
  if (observed > std::min(n_i, n_j)) return 0.0;
  boost::math::hypergeometric_distribution<double> dist(static_cast<unsigned>(n_i), static_cast<unsigned>(n_j),
                                                        static_cast<unsigned>(num_papers));
  const double p = boost::math::cdf(boost::math::complement(dist, static_cast<unsigned>(observed - 1)));
  return std::clamp(p, 0.0, 1.0);
}

CoCitationProjection cocitation_projection(const Graph& g, double alpha) {
  CoCitationProjection proj;
  proj.alpha = alpha;
  std::vector<std::int32_t> index(static_cast<std::size_t>(g.num_nodes()), -1);
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (g.role(x) == NodeRole::source) {
      index[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(proj.sources.size());
      proj.sources.push_back(x);
      proj.citations.push_back(g.degree(x));
    } else if (g.role(x) == NodeRole::paper) {
      ++proj.num_papers;
    }
  }

  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> counts;
  std::vector<std::int32_t> cited;
  for (NodeId p = 0; p < g.num_nodes(); ++p) {
    if (g.role(p) != NodeRole::paper) continue;
    cited.clear();
    for (EdgeId e : g.incident(p)) cited.push_back(index[static_cast<std::size_t>(g.other_end(e, p))]);
    std::sort(cited.begin(), cited.end());
    for (std::size_t a = 0; a < cited.size(); ++a)
      for (std::size_t b = a + 1; b < cited.size(); ++b) ++counts[{cited[a], cited[b]}];
  }

  proj.edges.reserve(counts.size());
  for (const auto& [pair, count] : counts) {
    CoCitationEdge e;
    e.i = pair.first;
    e.j = pair.second;
    e.count = count;
    const auto ni = proj.citations[static_cast<std::size_t>(e.i)];
    const auto nj = proj.citations[static_cast<std::size_t>(e.j)];
    e.expected = static_cast<double>(ni) * static_cast<double>(nj) / static_cast<double>(proj.num_papers);
    e.p_value = cocitation_tail_probability(count, ni, nj, proj.num_papers);
    e.significant = e.p_value <= alpha;
    proj.edges.push_back(e);
  }
  return proj;
}

}  // namespace linkcomm
