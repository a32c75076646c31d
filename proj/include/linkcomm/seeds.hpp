#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkcomm/graph.hpp"
#include "linkcomm/link_set.hpp"
#include "linkcomm/memetic.hpp"
#include "linkcomm/projection.hpp"

namespace linkcomm {

struct DistanceMatrix {
  std::int32_t n = 0;
  std::vector<double> d;  // row-major n x n
  std::vector<std::int32_t> zero_views;  // items whose view vector is all zero

  double operator()(std::int32_t i, std::int32_t j) const {
    return d[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
  double& at(std::int32_t i, std::int32_t j) {
    return d[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
};

// View of a source: its co-citation counts with every other source (the
// diagonal is left out). Distance = 1 - Salton cosine of two views.
// Sources co-cited with nothing sit at distance 1 from everything and are
// listed in zero_views. Throws std::invalid_argument for fewer than 2 sources.
DistanceMatrix view_distance_matrix(const CoCitationProjection& projection);

struct Merge {
  std::int32_t a;  // cluster ids: leaves 0..n-1, merge k creates n+k
  std::int32_t b;
  double height;
  std::int32_t size;
};

class Dendrogram {
 public:
  Dendrogram() = default;
  Dendrogram(std::int32_t num_leaves, std::vector<Merge> merges);

  std::int32_t num_leaves() const { return num_leaves_; }
  std::int32_t num_clusters() const { return num_leaves_ + static_cast<std::int32_t>(merges_.size()); }
  std::int32_t root() const { return num_clusters() - 1; }
  const std::vector<Merge>& merges() const { return merges_; }

  double height(std::int32_t c) const;
  std::int32_t size(std::int32_t c) const;
  std::optional<std::int32_t> parent(std::int32_t c) const;
  // Leaf indices, ascending.
  std::vector<std::int32_t> members(std::int32_t c) const;

 private:
  std::int32_t num_leaves_ = 0;
  std::vector<Merge> merges_;
  std::vector<std::int32_t> parent_;
};

// Ward minimum-variance agglomeration via Lance-Williams updates on
// squared distances. A merge's height is the updated squared distance,
// 2 n_a n_b / (n_a + n_b) |c_a - c_b|^2 for Euclidean input (twice the
// rise in within-cluster sum of squares). Ties go to the first pair in
// index order. Throws std::invalid_argument for fewer than 2 items.
Dendrogram ward_dendrogram(const DistanceMatrix& m);

// Single linkage; used only as a comparison baseline.
Dendrogram single_linkage_dendrogram(const DistanceMatrix& m);

struct Branch {
  std::int32_t cluster;
  std::int32_t size;
  double branch_length;  // height(parent) - height(cluster)
};

struct BranchOptions {
  // Size classes: exact sizes by default; with geometric_classes, bins
  // [2,3], [4,7], [8,15], ...
  bool geometric_classes = false;
  // How many clusters per size class enter the global ranking.
  std::int32_t ranks_per_class = 1;
};

// Non-leaf, non-root clusters ranked by branch length within their size
// class; the kept ones are ranked globally (ties: smaller size, then id)
// and the first `count` returned. Fewer available: all, with a warning.
std::vector<Branch> select_long_branch_clusters(const Dendrogram& d, std::int32_t count,
                                                const BranchOptions& options = {});

// All links to the listed sources; if they fall apart, the largest
// component with a warning. Throws DomainError when no links exist.
LinkSet seed_links_for_sources(const std::vector<NodeId>& sources, const Graph& g);

// Seeds from the long-branch Ward clusters of the co-citation views.
std::vector<Seed> ward_seeds(const Graph& g, const CoCitationProjection& projection, std::int32_t count,
                             const BranchOptions& options = {});

}  // namespace linkcomm
