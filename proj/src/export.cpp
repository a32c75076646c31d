#include "linkcomm/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace linkcomm {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* role_name(NodeRole r) {
  switch (r) {
    case NodeRole::paper: return "paper";
    case NodeRole::source: return "source";
    default: return "plain";
  }
}

void graphml_head(std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
}

std::string joined(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string id_list(const std::vector<std::size_t>& ids, char sep) {
  std::vector<std::string> parts;
  for (auto id : ids) parts.push_back(std::to_string(id));
  return joined(parts, sep);
}

}  // namespace

void write_graphml_clusters(std::ostream& out, const Graph& g, const std::vector<LinkSet>& clusters) {
  graphml_head(out);
  out << "  <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n";
  for (std::size_t k = 0; k < clusters.size(); ++k)
    out << "  <key id=\"c" << k << "\" for=\"edge\" attr.name=\"cluster_" << k << "\" attr.type=\"boolean\"/>\n";
  out << "  <graph id=\"citations\" edgedefault=\"undirected\">\n";
  for (NodeId x = 0; x < g.num_nodes(); ++x)
    out << "    <node id=\"" << xml_escape(g.name(x)) << "\"><data key=\"role\">" << role_name(g.role(x))
        << "</data></node>\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out << "    <edge id=\"e" << e << "\" source=\"" << xml_escape(g.name(g.edge(e).a)) << "\" target=\""
        << xml_escape(g.name(g.edge(e).b)) << "\">";
    for (std::size_t k = 0; k < clusters.size(); ++k)
      if (clusters[k].contains(e)) out << "<data key=\"c" << k << "\">true</data>";
    out << "</edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_graphml_view(std::ostream& out, const Graph& g, const CoCitationProjection& projection,
                        const ClusterView& view) {
  graphml_head(out);
  out << "  <key id=\"core\" for=\"node\" attr.name=\"core\" attr.type=\"boolean\"/>\n"
         "  <key id=\"citations\" for=\"node\" attr.name=\"citations\" attr.type=\"int\"/>\n"
         "  <key id=\"count\" for=\"edge\" attr.name=\"cocitations\" attr.type=\"int\"/>\n"
         "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
         "  <key id=\"colored\" for=\"edge\" attr.name=\"colored\" attr.type=\"boolean\"/>\n"
         "  <graph id=\"cocitation\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < projection.sources.size(); ++i)
    out << "    <node id=\"" << xml_escape(g.name(projection.sources[i])) << "\"><data key=\"core\">"
        << (view.node_core[i] ? "true" : "false") << "</data><data key=\"citations\">" << projection.citations[i]
        << "</data></node>\n";
  for (std::size_t k = 0; k < projection.edges.size(); ++k) {
    const auto& e = projection.edges[k];
    out << "    <edge source=\"" << xml_escape(g.name(projection.sources[static_cast<std::size_t>(e.i)]))
        << "\" target=\"" << xml_escape(g.name(projection.sources[static_cast<std::size_t>(e.j)]))
        << "\"><data key=\"count\">" << e.count << "</data><data key=\"weight\">" << format_double(e.weight())
        << "</data><data key=\"colored\">" << (view.edge_colored[k] ? "true" : "false") << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_graphml_towns(std::ostream& out, const Graph& g, const std::vector<Star>& stars,
                         const TownDecomposition& d) {
  std::vector<std::int32_t> town_of_edge(static_cast<std::size_t>(g.num_edges()), -1);
  std::vector<char> centre(static_cast<std::size_t>(g.num_nodes()), 0);
  std::vector<char> used(static_cast<std::size_t>(g.num_nodes()), 0);
  for (std::size_t t = 0; t < d.towns.size(); ++t) {
    centre[static_cast<std::size_t>(stars[static_cast<std::size_t>(d.towns[t].stars.front())].center)] = 1;
    for (auto i : d.towns[t].stars)
      for (EdgeId e : stars[static_cast<std::size_t>(i)].links) {
        town_of_edge[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(t);
        used[static_cast<std::size_t>(g.edge(e).a)] = used[static_cast<std::size_t>(g.edge(e).b)] = 1;
      }
  }
  graphml_head(out);
  out << "  <key id=\"centre\" for=\"node\" attr.name=\"centre\" attr.type=\"boolean\"/>\n"
         "  <key id=\"town\" for=\"edge\" attr.name=\"town\" attr.type=\"int\"/>\n"
         "  <graph id=\"towns\" edgedefault=\"undirected\">\n";
  for (NodeId x = 0; x < g.num_nodes(); ++x)
    if (used[static_cast<std::size_t>(x)])
      out << "    <node id=\"" << xml_escape(g.name(x)) << "\"><data key=\"centre\">"
          << (centre[static_cast<std::size_t>(x)] ? "true" : "false") << "</data></node>\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (town_of_edge[static_cast<std::size_t>(e)] >= 0)
      out << "    <edge source=\"" << xml_escape(g.name(g.edge(e).a)) << "\" target=\""
          << xml_escape(g.name(g.edge(e).b)) << "\"><data key=\"town\">" << town_of_edge[static_cast<std::size_t>(e)]
          << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
}

void write_clusters_csv(std::ostream& out, const ScheduleResult& result) {
  out << "id,links,psi,sigma,escape_probability,valid_at,invalidated_by,invalidated_at,provenance\n";
  for (const auto& r : result.records) {
    std::vector<std::string> valid;
    for (const auto& v : r.valid_at) valid.push_back(v.str());
    out << r.id << ',' << r.links.size() << ',' << format_double(r.psi.value) << ',' << format_double(r.psi.sigma)
        << ',' << format_double(escape_probability(r.links)) << ',' << csv_field(joined(valid, ' ')) << ','
        << (r.invalidated_by ? std::to_string(*r.invalidated_by) : "") << ','
        << (r.invalidated_at ? result.schedule[*r.invalidated_at].str() : "") << ','
        << csv_field(joined(r.provenance, ';')) << '\n';
  }
}

void write_invalidations_csv(std::ostream& out, const ScheduleResult& result) {
  out << "level,cluster,invalidated_by\n";
  for (const auto& inv : result.invalidations)
    out << result.schedule[inv.level].str() << ',' << inv.cluster << ',' << inv.by << '\n';
}

void write_overlaps_csv(std::ostream& out, const std::vector<std::size_t>& ids, const OverlapTable& table) {
  out << "a,b,overlap\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i; j < ids.size(); ++j) out << ids[i] << ',' << ids[j] << ',' << table.pairwise[i][j] << '\n';
}

void write_membership_csv(std::ostream& out, const Graph& g, const std::vector<std::size_t>& ids,
                          const MembershipReport& report) {
  out << "cluster,source,inside,citations,share,core,majority\n";
  for (std::size_t k = 0; k < ids.size(); ++k)
    for (const auto& s : report.shares[k])
      out << ids[k] << ',' << csv_field(std::string(bare_id(g.name(s.source)))) << ',' << s.inside << ',' << s.degree
          << ',' << format_double(s.share) << ',' << (s.core ? 1 : 0) << ',' << (s.majority ? 1 : 0) << '\n';
  out << "# bridging sources of complementary pairs\n";
  for (const auto& p : report.complementary) {
    out << "# " << ids[p.a] << '/' << ids[p.b] << ':';
    for (NodeId x : p.bridging) out << ' ' << bare_id(g.name(x));
    out << '\n';
  }
}

void write_matches_csv(std::ostream& out, const Graph&, const std::vector<std::size_t>& ids,
                       const std::vector<DendrogramMatch>& matches) {
  out << "ward_cluster,ward_size,link_cluster,majority_size,overlap,salton,symmetric_difference\n";
  for (const auto& m : matches)
    out << m.ward_cluster << ',' << m.ward_size << ',' << ids[m.link_cluster] << ',' << m.majority_size << ','
        << m.overlap << ',' << format_double(m.salton) << ',' << m.symmetric_difference << '\n';
}

void write_hierarchy_csv(std::ostream& out, const std::vector<std::size_t>& ids, const PolyHierarchy& h) {
  auto members = [&](std::size_t c) {
    std::vector<std::size_t> v;
    for (auto k : h.classes[c]) v.push_back(ids[k]);
    return id_list(v, ' ');
  };
  out << "sub,super\n";
  for (const auto& [a, b] : h.edges) out << members(a) << ',' << members(b) << '\n';
}

json link_set_json(const LinkSet& l) { return l.edges(); }

json cluster_records_json(const ScheduleResult& result) {
  json out = json::array();
  for (const auto& r : result.records) {
    json valid = json::array();
    for (const auto& v : r.valid_at) valid.push_back(v.str());
    json rec = {{"id", r.id},
                {"links", link_set_json(r.links)},
                {"size", r.links.size()},
                {"psi", r.psi.value},
                {"valid_at", valid},
                {"provenance", r.provenance}};
    rec["invalidated_by"] = r.invalidated_by ? json(*r.invalidated_by) : json(nullptr);
    rec["invalidated_at"] = r.invalidated_at ? json(result.schedule[*r.invalidated_at].str()) : json(nullptr);
    out.push_back(rec);
  }
  return out;
}

json dendrogram_json(const Graph& g, const CoCitationProjection& projection, const Dendrogram& d) {
  json leaves = json::array();
  for (auto x : projection.sources) leaves.push_back(std::string(bare_id(g.name(x))));
  json merges = json::array();
  for (const auto& m : d.merges()) merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}});
  return {{"leaves", leaves}, {"merges", merges}};
}

Dendrogram dendrogram_from_json(const json& j) {
  if (!j.contains("leaves") || !j.contains("merges")) throw std::invalid_argument("dendrogram JSON needs leaves and merges");
  const auto n = static_cast<std::int32_t>(j.at("leaves").size());
  std::vector<std::int32_t> size(static_cast<std::size_t>(n), 1);
  std::vector<Merge> merges;
  for (const auto& m : j.at("merges")) {
    const auto a = m.at("a").get<std::int32_t>();
    const auto b = m.at("b").get<std::int32_t>();
    if (a < 0 || b < 0 || a >= static_cast<std::int32_t>(size.size()) || b >= static_cast<std::int32_t>(size.size()))
      throw std::invalid_argument("merge refers to an unknown cluster");
    const auto s = size[static_cast<std::size_t>(a)] + size[static_cast<std::size_t>(b)];
    merges.push_back({a, b, m.at("height").get<double>(), s});
    size.push_back(s);
  }
  return Dendrogram(n, std::move(merges));
}

json towns_json(const Graph& g, const std::vector<Star>& stars, const std::vector<ResolutionLevel>& levels) {
  json out = json::array();
  for (const auto& level : levels) {
    json towns = json::array();
    for (const auto& t : level.decomposition.towns) {
      json members = json::array();
      for (auto i : t.stars) {
        const Star& s = stars[static_cast<std::size_t>(i)];
        members.push_back({{"source", std::string(bare_id(g.name(s.center)))}, {"size", s.size()}});
      }
      towns.push_back({{"centre", members.front()["source"]}, {"stars", members}});
    }
    out.push_back({{"q", std::to_string(level.decomposition.q.shared) + "/" + std::to_string(level.decomposition.q.outer)},
                   {"q_value", level.decomposition.q.value()},
                   {"largest_split", level.largest_split},
                   {"towns", towns}});
  }
  return out;
}

json planted_json(const PlantedGraph& planted) {
  json groups = json::array();
  for (std::size_t k = 0; k < planted.communities.size(); ++k)
    groups.push_back({{"group", k}, {"links", planted.communities[k]}});
  return {{"links", planted.graph.num_edges()}, {"groups", groups}};
}

json seeds_json(const Graph& g, const std::vector<Seed>& seeds) {
  json out = json::array();
  for (const auto& s : seeds) {
    json sources = json::array();
    for (NodeId x = 0; x < g.num_nodes(); ++x)
      if (g.role(x) == NodeRole::source && s.links.internal_degree(x) > 0) sources.push_back(std::string(bare_id(g.name(x))));
    out.push_back({{"label", s.label}, {"size", s.links.size()}, {"sources", sources}, {"links", link_set_json(s.links)}});
  }
  return out;
}

}  // namespace linkcomm
