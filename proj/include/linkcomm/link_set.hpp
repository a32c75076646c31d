#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "linkcomm/graph.hpp"

namespace linkcomm {

struct Fingerprint {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

// A set of edges of one graph, stored as a bitset, with cached internal
// degrees k_i^in(L) of every node and per-degree-class sums of
// k_i^in (k_i - k_i^in). The node-cut mass sigma is derived from those
// integer sums, so it depends only on the set and not on the order of
// moves that produced it.
//
// The graph must outlive the set.
class LinkSet {
 public:
  // Unbound placeholder; assign a bound set before use.
  LinkSet() = default;
  explicit LinkSet(const Graph& g);
  static LinkSet of(const Graph& g, std::span<const EdgeId> edges);
  static LinkSet all(const Graph& g);

  const Graph& graph() const { return *graph_; }

  bool contains(EdgeId e) const {
    return (words_[static_cast<std::size_t>(e) >> 6] >> (static_cast<unsigned>(e) & 63U)) & 1U;
  }
  void add(EdgeId e);
  void remove(EdgeId e);
  void toggle(EdgeId e) { contains(e) ? remove(e) : add(e); }

  std::int32_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  // k_in(L) = sum of internal degrees = 2|L|.
  std::int64_t internal_degree() const { return 2 * static_cast<std::int64_t>(size_); }
  std::int32_t internal_degree(NodeId x) const { return k_in_[static_cast<std::size_t>(x)]; }
  bool attached(NodeId x) const { return internal_degree(x) > 0; }
  // Node with links both inside and outside the set.
  bool boundary(NodeId x) const {
    const auto k = internal_degree(x);
    return k > 0 && k < graph_->degree(x);
  }

  std::vector<EdgeId> edges() const;
  template <class F>
  void for_each_edge(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(static_cast<EdgeId>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  double sigma() const;
  // sigma with two degree-class sums shifted; used for what-if moves.
  double sigma_shifted(std::int32_t class_a, std::int64_t delta_a, std::int32_t class_b,
                       std::int64_t delta_b) const;
  std::span<const std::int64_t> class_sums() const { return class_sum_; }

  Fingerprint fingerprint() const { return fingerprint_; }
  std::span<const std::uint64_t> words() const { return words_; }

  // Recomputes every cache from the bitset and compares.
  bool cache_consistent() const;

  friend bool operator==(const LinkSet& a, const LinkSet& b) { return a.words_ == b.words_; }
  // Orders by size, then by the sorted member lists.
  friend std::strong_ordering operator<=>(const LinkSet& a, const LinkSet& b);

 private:
  void shift_node(NodeId x, std::int32_t delta);

  const Graph* graph_ = nullptr;
  std::vector<std::uint64_t> words_;
  std::vector<std::int32_t> k_in_;
  std::vector<std::int64_t> class_sum_;
  std::int32_t size_ = 0;
  Fingerprint fingerprint_;
};

// Per-edge random keys used for incremental set fingerprints.
Fingerprint edge_key(EdgeId e);

std::int32_t intersection_size(const LinkSet& a, const LinkSet& b);
std::int32_t symmetric_difference_size(const LinkSet& a, const LinkSet& b);
LinkSet set_union(const LinkSet& a, const LinkSet& b);
LinkSet set_intersection(const LinkSet& a, const LinkSet& b);
LinkSet set_difference(const LinkSet& a, const LinkSet& b);

// E - L. Throws DomainError when L is empty or all of E.
LinkSet complement(const LinkSet& l);

// Connectivity of the subgraph formed by L's edges and their endpoints.
// The empty set is not connected.
bool is_connected(const LinkSet& l);
// Components ordered by size (descending), ties by smallest edge id.
std::vector<LinkSet> components(const LinkSet& l);
LinkSet largest_component(const LinkSet& l);

}  // namespace linkcomm
