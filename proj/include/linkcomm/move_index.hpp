#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "linkcomm/link_set.hpp"

namespace linkcomm {

// Ordered view of the greedy moves available from a link set, maintained
// under single-edge toggles.
//
// Within one direction every move changes k_in(L) by the same amount, so
// moves rank by their change of sigma alone. That change is a sum of one
// term per endpoint, each a fraction depending only on that node's
// internal and total degree. Each edge is filed under its hub endpoint
// keyed by the leaf endpoint's term; a toggle re-keys only the edges for
// which a touched node is the leaf (cheap when hubs are high-degree
// sources). Keys are compared exactly, ties go to the smaller edge id.
//
// Additions: edges outside L sharing a node with L.
// Removals: edges in L incident to a boundary node.
class MoveIndex {
 public:
  explicit MoveIndex(const LinkSet& l);

  // Must be called right after l.toggle(e) on the indexed set.
  void on_toggle(const LinkSet& l, EdgeId e);

  // Lowest-cost addition, excluding the one that would complete E.
  std::optional<EdgeId> best_addition(const LinkSet& l) const;

  // Lowest-cost removal accepted by `admissible` (e.g. keeps L connected),
  // scanning candidates in cost order. None when |L| < 2.
  std::optional<EdgeId> best_removal(const LinkSet& l, const std::function<bool(EdgeId)>& admissible) const;

  // All indexed candidates in cost order (tests and mutation).
  std::vector<EdgeId> additions_in_order() const;
  std::vector<EdgeId> removals_in_order() const;

 private:
  struct Entry {
    std::int64_t num;
    std::int64_t den;
    EdgeId edge;
  };
  struct EntryLess {
    bool operator()(const Entry& x, const Entry& y) const;
  };
  // Tournament tree over hubs holding each hub's best total; no
  // allocation on update.
  class HubTree {
   public:
    explicit HubTree(std::size_t n = 0);
    void set(NodeId hub, const std::optional<Entry>& total);
    bool empty() const { return winner_[1] < 0; }
    NodeId top() const { return winner_[1]; }
    const Entry& value(NodeId hub) const { return value_[static_cast<std::size_t>(hub)]; }
    // Calls f(hub) for hubs in increasing order of their total until f
    // returns true.
    template <class F>
    void visit_in_order(F&& f) const;

   private:
    bool better(NodeId a, NodeId b) const;
    std::size_t leaves_ = 1;
    std::vector<NodeId> winner_;
    std::vector<Entry> value_;
    std::vector<char> present_;
  };
  enum class Slot : std::uint8_t { none, add, remove };

  Slot desired_slot(const LinkSet& l, EdgeId e) const;
  Entry leaf_entry(const LinkSet& l, EdgeId e, Slot slot) const;
  Entry hub_term(const LinkSet& l, NodeId hub, Slot slot) const;
  void refresh(const LinkSet& l, EdgeId e);
  void refresh_hub(const LinkSet& l, NodeId hub);
  void mark(NodeId hub);
  std::vector<Entry>& bucket(NodeId hub, Slot slot);

  const Graph* graph_;
  std::vector<Slot> slot_;
  std::vector<Entry> key_;  // entry as filed, for lookup on erase
  std::vector<std::vector<Entry>> adds_;
  std::vector<std::vector<Entry>> removes_;
  HubTree best_add_;
  HubTree best_remove_;
  std::vector<NodeId> dirty_;
  std::vector<char> is_dirty_;
};

// Reusable scratch space for connectivity probes on one graph.
class ConnectivityProbe {
 public:
  explicit ConnectivityProbe(const Graph& g);
  // True iff L - e is still connected (assumes L connected, e in L, |L| >= 2).
  bool removal_keeps_connected(const LinkSet& l, EdgeId e);

 private:
  const Graph* graph_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> front_a_;
  std::vector<NodeId> front_b_;
  std::vector<NodeId> next_;
};

}  // namespace linkcomm
