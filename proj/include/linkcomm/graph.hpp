#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace linkcomm {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

enum class NodeRole : std::uint8_t { paper, source, plain };

struct Edge {
  NodeId a;  // citing paper for citation graphs
  NodeId b;  // cited source for citation graphs
};

// Immutable simple undirected graph with per-node roles.
//
// Citation graphs are strictly bipartite: every edge joins a paper node
// (Edge::a) to a source node (Edge::b). Node names are role-qualified
// ("paper:X", "source:X") so one document can occur in both roles.
// Edge ids are dense and keep the order of construction.
//
// Degrees are also grouped into classes (distinct degree values); the
// node-cut mass of a link set is accumulated per class.
class Graph {
 public:
  Graph() = default;

  // General graph, nodes named "0".."n-1" with role plain.
  static Graph undirected(NodeId num_nodes, std::vector<Edge> edges);

  // Throws std::invalid_argument on self loops, duplicate edges, out of
  // range endpoints, or (for paper/source roles) non-bipartite edges.
  Graph(std::vector<std::string> names, std::vector<NodeRole> roles, std::vector<Edge> edges);

  NodeId num_nodes() const { return static_cast<NodeId>(roles_.size()); }
  EdgeId num_edges() const { return static_cast<EdgeId>(edges_.size()); }
  bool empty() const { return edges_.empty(); }

  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  NodeId other_end(EdgeId e, NodeId x) const {
    const Edge& ed = edge(e);
    return ed.a == x ? ed.b : ed.a;
  }

  std::span<const EdgeId> incident(NodeId x) const {
    auto begin = offsets_[static_cast<std::size_t>(x)];
    auto end = offsets_[static_cast<std::size_t>(x) + 1];
    return {incidence_.data() + begin, static_cast<std::size_t>(end - begin)};
  }
  std::int32_t degree(NodeId x) const {
    return static_cast<std::int32_t>(offsets_[static_cast<std::size_t>(x) + 1] -
                                     offsets_[static_cast<std::size_t>(x)]);
  }

  NodeRole role(NodeId x) const { return roles_[static_cast<std::size_t>(x)]; }
  const std::string& name(NodeId x) const { return names_[static_cast<std::size_t>(x)]; }
  std::optional<NodeId> find(std::string_view qualified_name) const;

  // Ids of nodes with the given role, ascending.
  std::vector<NodeId> nodes_with_role(NodeRole r) const;
  NodeId count_role(NodeRole r) const;

  // Distinct degree values, ascending, and each node's index into them.
  std::span<const std::int32_t> degree_classes() const { return class_degree_; }
  std::int32_t degree_class(NodeId x) const { return class_of_[static_cast<std::size_t>(x)]; }

  // Endpoint that carries the per-node candidate structures in local search:
  // the higher-degree end, ties to the smaller id.
  NodeId hub(EdgeId e) const { return hub_[static_cast<std::size_t>(e)]; }

 private:
  void build_indices();

  std::vector<std::string> names_;
  std::vector<NodeRole> roles_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> offsets_;
  std::vector<EdgeId> incidence_;
  std::vector<std::int32_t> class_degree_;
  std::vector<std::int32_t> class_of_;
  std::vector<NodeId> hub_;
  std::unordered_map<std::string, NodeId> by_name_;
};

std::string paper_name(std::string_view id);
std::string source_name(std::string_view id);
// Strips the "paper:"/"source:" qualifier.
std::string_view bare_id(std::string_view qualified);

struct CitationRecord {
  std::string paper;
  std::string source;
};

struct LoadResult {
  Graph graph;
  std::size_t duplicates = 0;  // repeated (paper, source) pairs collapsed
};

// Builds the deduplicated citation graph; nodes are numbered in order of
// first appearance, edges in order of first occurrence.
LoadResult build_citation_graph(std::span<const CitationRecord> records);

// Tab-separated `paper<TAB>source` lines; `#` comments and blank lines are
// skipped. Throws ParseError with the line number on malformed records.
LoadResult load_edge_list(std::istream& in);
LoadResult load_edge_list_file(const std::string& path);

// General undirected graph: `a b` per line (tab or spaces), node names as
// given. Repeated pairs in either orientation collapse; self loops throw
// ParseError.
LoadResult load_plain_edge_list(std::istream& in);
LoadResult load_plain_edge_list_file(const std::string& path);

struct PruneResult {
  Graph graph;
  std::size_t removed_papers = 0;
  std::size_t removed_sources = 0;
  std::vector<EdgeId> original_edge;  // new edge id -> id in the input graph
  bool empty = false;
};

// Drops papers citing fewer than two sources, then sources left uncited.
// A single pass suffices: surviving papers keep all their sources.
PruneResult prune_single_citers(const Graph& g);

}  // namespace linkcomm
