#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkcomm/analysis.hpp"
#include "linkcomm/bench.hpp"
#include "linkcomm/cplc.hpp"
#include "linkcomm/memetic.hpp"
#include "linkcomm/seeds.hpp"

namespace linkcomm {

// Shortest text that reads back to the same double.
std::string format_double(double x);
std::string csv_field(const std::string& s);

// Citation graph with one boolean edge attribute per cluster.
void write_graphml_clusters(std::ostream& out, const Graph& g, const std::vector<LinkSet>& clusters);
// Projection view of one cluster: core sources and majority edges coloured.
void write_graphml_view(std::ostream& out, const Graph& g, const CoCitationProjection& projection,
                        const ClusterView& view);
// Town colouring of a link set: town index per link, centres marked.
void write_graphml_towns(std::ostream& out, const Graph& g, const std::vector<Star>& stars,
                         const TownDecomposition& d);

void write_clusters_csv(std::ostream& out, const ScheduleResult& result);
void write_invalidations_csv(std::ostream& out, const ScheduleResult& result);
void write_overlaps_csv(std::ostream& out, const std::vector<std::size_t>& ids, const OverlapTable& table);
void write_membership_csv(std::ostream& out, const Graph& g, const std::vector<std::size_t>& ids,
                          const MembershipReport& report);
void write_matches_csv(std::ostream& out, const Graph& g, const std::vector<std::size_t>& ids,
                       const std::vector<DendrogramMatch>& matches);
void write_hierarchy_csv(std::ostream& out, const std::vector<std::size_t>& ids, const PolyHierarchy& h);

nlohmann::json link_set_json(const LinkSet& l);
nlohmann::json cluster_records_json(const ScheduleResult& result);
nlohmann::json dendrogram_json(const Graph& g, const CoCitationProjection& projection, const Dendrogram& d);
// Inverse of dendrogram_json's merge list. Throws std::invalid_argument.
Dendrogram dendrogram_from_json(const nlohmann::json& j);
nlohmann::json towns_json(const Graph& g, const std::vector<Star>& stars, const std::vector<ResolutionLevel>& levels);
nlohmann::json planted_json(const PlantedGraph& planted);
nlohmann::json seeds_json(const Graph& g, const std::vector<Seed>& seeds);

}  // namespace linkcomm
