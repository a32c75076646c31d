#include "linkcomm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "linkcomm/errors.hpp"

namespace linkcomm {

namespace {
std::mutex warn_mutex;
bool warnings_enabled = true;

std::uint64_t pair_key(NodeId a, NodeId b) {
  auto lo = static_cast<std::uint32_t>(std::min(a, b));
  auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}
}  // namespace

// Each distinct message is printed once per process.
void warn(const std::string& message) {
  static std::unordered_set<std::string> seen;
  std::lock_guard lock(warn_mutex);
  if (warnings_enabled && seen.insert(message).second) std::clog << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) {
  std::lock_guard lock(warn_mutex);
  warnings_enabled = enabled;
}

Graph Graph::undirected(NodeId num_nodes, std::vector<Edge> edges) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(num_nodes));
  for (NodeId i = 0; i < num_nodes; ++i) names.push_back(std::to_string(i));
  return Graph(std::move(names), std::vector<NodeRole>(static_cast<std::size_t>(num_nodes), NodeRole::plain),
               std::move(edges));
}

Graph::Graph(std::vector<std::string> names, std::vector<NodeRole> roles, std::vector<Edge> edges)
    : names_(std::move(names)), roles_(std::move(roles)), edges_(std::move(edges)) {
  if (names_.size() != roles_.size()) throw std::invalid_argument("names and roles differ in length");
  const auto n = static_cast<NodeId>(roles_.size());
  std::unordered_map<std::uint64_t, EdgeId> seen;
  seen.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.a == e.b) throw std::invalid_argument("self loop on node " + names_[static_cast<std::size_t>(e.a)]);
    const NodeRole ra = roles_[static_cast<std::size_t>(e.a)];
    const NodeRole rb = roles_[static_cast<std::size_t>(e.b)];
    if (ra != NodeRole::plain || rb != NodeRole::plain) {
      if (ra != NodeRole::paper || rb != NodeRole::source)
        throw std::invalid_argument("citation edge must join a paper to a source");
    }
    if (!seen.emplace(pair_key(e.a, e.b), static_cast<EdgeId>(i)).second)
      throw std::invalid_argument("duplicate edge");
  }
  for (NodeId i = 0; i < n; ++i) {
    if (!by_name_.emplace(names_[static_cast<std::size_t>(i)], i).second)
      throw std::invalid_argument("duplicate node name " + names_[static_cast<std::size_t>(i)]);
  }
  build_indices();
}

void Graph::build_indices() {
  const auto n = static_cast<std::size_t>(num_nodes());
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[static_cast<std::size_t>(e.a) + 1];
    ++offsets_[static_cast<std::size_t>(e.b) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  incidence_.assign(static_cast<std::size_t>(offsets_[n]), 0);
  std::vector<std::int64_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    incidence_[static_cast<std::size_t>(fill[static_cast<std::size_t>(edges_[i].a)]++)] = static_cast<EdgeId>(i);
    incidence_[static_cast<std::size_t>(fill[static_cast<std::size_t>(edges_[i].b)]++)] = static_cast<EdgeId>(i);
  }

  class_degree_.clear();
  for (NodeId x = 0; x < num_nodes(); ++x) class_degree_.push_back(degree(x));
  std::sort(class_degree_.begin(), class_degree_.end());
  class_degree_.erase(std::unique(class_degree_.begin(), class_degree_.end()), class_degree_.end());
  class_of_.resize(n);
  for (NodeId x = 0; x < num_nodes(); ++x) {
    auto it = std::lower_bound(class_degree_.begin(), class_degree_.end(), degree(x));
    class_of_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(it - class_degree_.begin());
  }

  hub_.resize(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const auto da = degree(e.a), db = degree(e.b);
    hub_[i] = (da > db || (da == db && e.a < e.b)) ? e.a : e.b;
  }
}

std::optional<NodeId> Graph::find(std::string_view qualified_name) const {
  auto it = by_name_.find(std::string(qualified_name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Graph::nodes_with_role(NodeRole r) const {
  std::vector<NodeId> out;
  for (NodeId x = 0; x < num_nodes(); ++x)
    if (role(x) == r) out.push_back(x);
  return out;
}

NodeId Graph::count_role(NodeRole r) const {
  return static_cast<NodeId>(std::count(roles_.begin(), roles_.end(), r));
}

std::string paper_name(std::string_view id) { return "paper:" + std::string(id); }
std::string source_name(std::string_view id) { return "source:" + std::string(id); }

std::string_view bare_id(std::string_view qualified) {
  for (std::string_view prefix : {std::string_view("paper:"), std::string_view("source:")})
    if (qualified.starts_with(prefix)) return qualified.substr(prefix.size());
  return qualified;
}

LoadResult build_citation_graph(std::span<const CitationRecord> records) {
  std::vector<std::string> names;
  std::vector<NodeRole> roles;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](std::string qualified, NodeRole role) {
    auto [it, inserted] = ids.emplace(std::move(qualified), static_cast<NodeId>(names.size()));
    if (inserted) {
      names.push_back(it->first);
      roles.push_back(role);
    }
    return it->second;
  };

  LoadResult result;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, EdgeId> seen;
  for (const auto& rec : records) {
    if (rec.paper.empty() || rec.source.empty()) throw std::invalid_argument("empty node id");
    const NodeId p = intern(paper_name(rec.paper), NodeRole::paper);
    const NodeId s = intern(source_name(rec.source), NodeRole::source);
    if (!seen.emplace(pair_key(p, s), static_cast<EdgeId>(edges.size())).second) {
      ++result.duplicates;
      continue;
    }
    edges.push_back({p, s});
  }
  result.graph = Graph(std::move(names), std::move(roles), std::move(edges));
  return result;
}

LoadResult load_edge_list(std::istream& in) {
  std::vector<CitationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(line_no, "expected paper_id<TAB>source_id");
    if (line.find('\t', tab + 1) != std::string::npos) throw ParseError(line_no, "more than two fields");
    CitationRecord rec{line.substr(0, tab), line.substr(tab + 1)};
    if (rec.paper.empty()) throw ParseError(line_no, "empty paper id");
    if (rec.source.empty()) throw ParseError(line_no, "empty source id");
    records.push_back(std::move(rec));
  }
  return build_citation_graph(records);
}

LoadResult load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in);
}

LoadResult load_plain_edge_list(std::istream& in) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };
  LoadResult result;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, EdgeId> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b)) throw ParseError(line_no, "expected two node ids");
    if (fields >> extra) throw ParseError(line_no, "more than two fields");
    if (a == b) throw ParseError(line_no, "self loop on " + a);
    const NodeId x = intern(a), y = intern(b);
    if (!seen.emplace(pair_key(x, y), static_cast<EdgeId>(edges.size())).second) {
      ++result.duplicates;
      continue;
    }
    edges.push_back({x, y});
  }
  std::vector<NodeRole> roles(names.size(), NodeRole::plain);
  result.graph = Graph(std::move(names), std::move(roles), std::move(edges));
  return result;
}

LoadResult load_plain_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_plain_edge_list(in);
}

PruneResult prune_single_citers(const Graph& g) {
  PruneResult out;
  std::vector<char> keep_node(static_cast<std::size_t>(g.num_nodes()), 0);
  std::vector<char> keep_edge(static_cast<std::size_t>(g.num_edges()), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const bool citing = g.role(ed.a) == NodeRole::paper ? g.degree(ed.a) >= 2 : true;
    if (citing) {
      keep_edge[static_cast<std::size_t>(e)] = 1;
      keep_node[static_cast<std::size_t>(ed.a)] = 1;
      keep_node[static_cast<std::size_t>(ed.b)] = 1;
    }
  }

  std::vector<NodeId> remap(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<std::string> names;
  std::vector<NodeRole> roles;
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (keep_node[static_cast<std::size_t>(x)]) {
      remap[static_cast<std::size_t>(x)] = static_cast<NodeId>(names.size());
      names.push_back(g.name(x));
      roles.push_back(g.role(x));
    } else if (g.role(x) == NodeRole::source) {
      ++out.removed_sources;
    } else {
      ++out.removed_papers;
    }
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!keep_edge[static_cast<std::size_t>(e)]) continue;
    const Edge& ed = g.edge(e);
    edges.push_back({remap[static_cast<std::size_t>(ed.a)], remap[static_cast<std::size_t>(ed.b)]});
    out.original_edge.push_back(e);
  }
  out.graph = Graph(std::move(names), std::move(roles), std::move(edges));
  out.empty = out.graph.empty();
  if (out.empty) warn("graph is empty after removing papers that cite fewer than two sources");
  return out;
}

}  // namespace linkcomm
