#include "linkcomm/move_index.hpp"

#include <algorithm>
#include <queue>

namespace linkcomm {

bool MoveIndex::EntryLess::operator()(const Entry& x, const Entry& y) const {
  const __int128 lhs = static_cast<__int128>(x.num) * y.den;
  const __int128 rhs = static_cast<__int128>(y.num) * x.den;
  if (lhs != rhs) return lhs < rhs;
  return x.edge < y.edge;
}

MoveIndex::HubTree::HubTree(std::size_t n) {
  while (leaves_ < n) leaves_ <<= 1;
  winner_.assign(2 * leaves_, -1);
  value_.resize(n);
  present_.assign(n, 0);
}

bool MoveIndex::HubTree::better(NodeId a, NodeId b) const {
  if (a < 0) return false;
  if (b < 0) return true;
  return EntryLess{}(value_[static_cast<std::size_t>(a)], value_[static_cast<std::size_t>(b)]);
}

void MoveIndex::HubTree::set(NodeId hub, const std::optional<Entry>& total) {
  const auto h = static_cast<std::size_t>(hub);
  present_[h] = total.has_value();
  if (total) value_[h] = *total;
  std::size_t i = leaves_ + h;
  winner_[i] = total ? hub : -1;
  for (i >>= 1; i >= 1; i >>= 1) {
    const NodeId a = winner_[2 * i], b = winner_[2 * i + 1];
    winner_[i] = better(b, a) ? b : a;
  }
}

template <class F>
void MoveIndex::HubTree::visit_in_order(F&& f) const {
  // best-first walk: a subtree's winner is its minimum
  auto greater = [&](std::size_t x, std::size_t y) { return better(winner_[y], winner_[x]); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> open(greater);
  if (winner_[1] >= 0) open.push(1);
  while (!open.empty()) {
    const std::size_t i = open.top();
    open.pop();
    if (i >= leaves_) {
      if (f(winner_[i])) return;
      continue;
    }
    for (std::size_t c : {2 * i, 2 * i + 1})
      if (winner_[c] >= 0) open.push(c);
  }
}

MoveIndex::MoveIndex(const LinkSet& l)
    : graph_(&l.graph()),
      slot_(static_cast<std::size_t>(l.graph().num_edges()), Slot::none),
      key_(static_cast<std::size_t>(l.graph().num_edges())),
      adds_(static_cast<std::size_t>(l.graph().num_nodes())),
      removes_(static_cast<std::size_t>(l.graph().num_nodes())),
      best_add_(static_cast<std::size_t>(l.graph().num_nodes())),
      best_remove_(static_cast<std::size_t>(l.graph().num_nodes())),
      is_dirty_(static_cast<std::size_t>(l.graph().num_nodes()), 0) {
  const Graph& g = *graph_;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Slot s = desired_slot(l, e);
    if (s == Slot::none) continue;
    slot_[static_cast<std::size_t>(e)] = s;
    key_[static_cast<std::size_t>(e)] = leaf_entry(l, e, s);
    bucket(g.hub(e), s).push_back(key_[static_cast<std::size_t>(e)]);
  }
  for (NodeId h = 0; h < g.num_nodes(); ++h) {
    auto& a = adds_[static_cast<std::size_t>(h)];
    auto& r = removes_[static_cast<std::size_t>(h)];
    std::sort(a.begin(), a.end(), EntryLess{});
    std::sort(r.begin(), r.end(), EntryLess{});
    if (!a.empty() || !r.empty()) refresh_hub(l, h);
  }
}

std::vector<MoveIndex::Entry>& MoveIndex::bucket(NodeId hub, Slot slot) {
  return slot == Slot::add ? adds_[static_cast<std::size_t>(hub)] : removes_[static_cast<std::size_t>(hub)];
}

MoveIndex::Slot MoveIndex::desired_slot(const LinkSet& l, EdgeId e) const {
  const Edge& ed = graph_->edge(e);
  if (l.contains(e)) return (l.boundary(ed.a) || l.boundary(ed.b)) ? Slot::remove : Slot::none;
  return (l.attached(ed.a) || l.attached(ed.b)) ? Slot::add : Slot::none;
}

// Change of node x's sigma term k(K-k)/K when its internal degree moves by
// +1 (add) or -1 (remove): (K-2k-1)/K and (2k-1-K)/K respectively.
MoveIndex::Entry MoveIndex::hub_term(const LinkSet& l, NodeId x, Slot slot) const {
  const std::int64_t k = l.internal_degree(x);
  const std::int64_t degree = graph_->degree(x);
  const std::int64_t num = slot == Slot::add ? degree - 2 * k - 1 : 2 * k - 1 - degree;
  return {num, degree, -1};
}

MoveIndex::Entry MoveIndex::leaf_entry(const LinkSet& l, EdgeId e, Slot slot) const {
  const NodeId leaf = graph_->other_end(e, graph_->hub(e));
  Entry t = hub_term(l, leaf, slot);
  t.edge = e;
  return t;
}

void MoveIndex::mark(NodeId hub) {
  if (!is_dirty_[static_cast<std::size_t>(hub)]) {
    is_dirty_[static_cast<std::size_t>(hub)] = 1;
    dirty_.push_back(hub);
  }
}

void MoveIndex::refresh(const LinkSet& l, EdgeId e) {
  const auto ei = static_cast<std::size_t>(e);
  const Slot want = desired_slot(l, e);
  const Slot have = slot_[ei];
  const Entry key = want == Slot::none ? Entry{0, 1, e} : leaf_entry(l, e, want);
  if (want == have && (want == Slot::none || (key.num == key_[ei].num && key.den == key_[ei].den))) return;
  const NodeId hub = graph_->hub(e);
  if (have != Slot::none) {
    auto& vec = bucket(hub, have);
    auto it = std::lower_bound(vec.begin(), vec.end(), key_[ei], EntryLess{});
    vec.erase(it);
  }
  if (want != Slot::none) {
    auto& vec = bucket(hub, want);
    vec.insert(std::upper_bound(vec.begin(), vec.end(), key, EntryLess{}), key);
  }
  slot_[ei] = want;
  key_[ei] = key;
  mark(hub);
}

void MoveIndex::refresh_hub(const LinkSet& l, NodeId h) {
  const auto hi = static_cast<std::size_t>(h);
  auto update = [&](HubTree& tree, const std::vector<Entry>& vec, Slot slot) {
    if (vec.empty()) {
      tree.set(h, std::nullopt);
      return;
    }
    const Entry hub_key = hub_term(l, h, slot);
    const Entry& leaf = vec.front();
    tree.set(h, Entry{hub_key.num * leaf.den + leaf.num * hub_key.den, hub_key.den * leaf.den, leaf.edge});
  };
  update(best_add_, adds_[hi], Slot::add);
  update(best_remove_, removes_[hi], Slot::remove);
}

void MoveIndex::on_toggle(const LinkSet& l, EdgeId e) {
  const Graph& g = *graph_;
  const bool now_member = l.contains(e);
  const Edge& ed = g.edge(e);
  for (NodeId x : {ed.a, ed.b}) {
    const std::int32_t k = l.internal_degree(x);
    const std::int32_t before = now_member ? k - 1 : k + 1;
    const std::int32_t degree = g.degree(x);
    const bool attach_changed = (k > 0) != (before > 0);
    const bool boundary_changed = (k > 0 && k < degree) != (before > 0 && before < degree);
    const bool hub_status_changed = attach_changed || boundary_changed;
    for (EdgeId f : g.incident(x)) {
      if (g.hub(f) != x || hub_status_changed) refresh(l, f);
    }
    mark(x);
  }
  refresh(l, e);
  for (NodeId h : dirty_) {
    is_dirty_[static_cast<std::size_t>(h)] = 0;
    refresh_hub(l, h);
  }
  dirty_.clear();
}

std::optional<EdgeId> MoveIndex::best_addition(const LinkSet& l) const {
  if (l.size() + 1 >= graph_->num_edges()) return std::nullopt;
  if (best_add_.empty()) return std::nullopt;
  return best_add_.value(best_add_.top()).edge;
}

std::optional<EdgeId> MoveIndex::best_removal(const LinkSet& l,
                                              const std::function<bool(EdgeId)>& admissible) const {
  if (l.size() < 2 || best_remove_.empty()) return std::nullopt;
  // fast path: the overall best is usually admissible
  const EdgeId first = best_remove_.value(best_remove_.top()).edge;
  if (admissible(first)) return first;
  // k-way merge over hub buckets, pulling hubs in order of their best entry.
  struct Cursor {
    Entry total;
    NodeId hub;
    std::size_t pos;
  };
  auto greater = [](const Cursor& x, const Cursor& y) { return EntryLess{}(y.total, x.total); };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(greater)> heap(greater);
  auto cursor_at = [&](NodeId h, std::size_t pos) {
    const Entry hub_key = hub_term(l, h, Slot::remove);
    const Entry& leaf = removes_[static_cast<std::size_t>(h)][pos];
    return Cursor{{hub_key.num * leaf.den + leaf.num * hub_key.den, hub_key.den * leaf.den, leaf.edge}, h, pos};
  };
  std::optional<EdgeId> found;
  // drain the heap up to the current hub's best before admitting it
  auto drain = [&](const Entry* bound) {
    while (!heap.empty() && (!bound || EntryLess{}(heap.top().total, *bound))) {
      const Cursor c = heap.top();
      heap.pop();
      if (admissible(c.total.edge)) {
        found = c.total.edge;
        return true;
      }
      if (c.pos + 1 < removes_[static_cast<std::size_t>(c.hub)].size()) heap.push(cursor_at(c.hub, c.pos + 1));
    }
    return false;
  };
  best_remove_.visit_in_order([&](NodeId h) {
    if (drain(&best_remove_.value(h))) return true;
    heap.push(cursor_at(h, 0));
    return false;
  });
  if (!found) drain(nullptr);
  return found;
}

std::vector<EdgeId> MoveIndex::additions_in_order() const {
  std::vector<std::pair<Entry, EdgeId>> all;
  for (NodeId h = 0; h < graph_->num_nodes(); ++h) {
    if (adds_[static_cast<std::size_t>(h)].empty()) continue;
    const Entry& top = best_add_.value(h);
    const Entry& top_leaf = adds_[static_cast<std::size_t>(h)].front();
    // hub term = total - top leaf term, recovered exactly via common denominators
    for (const Entry& leaf : adds_[static_cast<std::size_t>(h)]) {
      const std::int64_t hub_den = top.den / top_leaf.den;
      const std::int64_t hub_num = (top.num - top_leaf.num * hub_den) / top_leaf.den;
      all.push_back({{hub_num * leaf.den + leaf.num * hub_den, hub_den * leaf.den, leaf.edge}, leaf.edge});
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return EntryLess{}(x.first, y.first); });
  std::vector<EdgeId> out;
  for (const auto& p : all) out.push_back(p.second);
  return out;
}

std::vector<EdgeId> MoveIndex::removals_in_order() const {
  std::vector<std::pair<Entry, EdgeId>> all;
  for (NodeId h = 0; h < graph_->num_nodes(); ++h) {
    if (removes_[static_cast<std::size_t>(h)].empty()) continue;
    const Entry& top = best_remove_.value(h);
    const Entry& top_leaf = removes_[static_cast<std::size_t>(h)].front();
    for (const Entry& leaf : removes_[static_cast<std::size_t>(h)]) {
      const std::int64_t hub_den = top.den / top_leaf.den;
      const std::int64_t hub_num = (top.num - top_leaf.num * hub_den) / top_leaf.den;
      all.push_back({{hub_num * leaf.den + leaf.num * hub_den, hub_den * leaf.den, leaf.edge}, leaf.edge});
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return EntryLess{}(x.first, y.first); });
  std::vector<EdgeId> out;
  for (const auto& p : all) out.push_back(p.second);
  return out;
}

ConnectivityProbe::ConnectivityProbe(const Graph& g)
    : graph_(&g), mark_(static_cast<std::size_t>(g.num_nodes()), 0) {}

bool ConnectivityProbe::removal_keeps_connected(const LinkSet& l, EdgeId e) {
  const Graph& g = *graph_;
  const Edge& ed = g.edge(e);
  // A pendant edge leaves its far endpoint behind with no links; the rest stays connected.
  if (l.internal_degree(ed.a) == 1 || l.internal_degree(ed.b) == 1) return true;

  if (epoch_ >= 0xfffffff0U) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 0;
  }
  const std::uint32_t side_a = ++epoch_;
  const std::uint32_t side_b = ++epoch_;
  front_a_.assign(1, ed.a);
  front_b_.assign(1, ed.b);
  mark_[static_cast<std::size_t>(ed.a)] = side_a;
  mark_[static_cast<std::size_t>(ed.b)] = side_b;
  // Grow the smaller frontier one level at a time; an exhausted side means e was a bridge.
  while (!front_a_.empty() && !front_b_.empty()) {
    const bool grow_a = front_a_.size() <= front_b_.size();
    auto& front = grow_a ? front_a_ : front_b_;
    const std::uint32_t own = grow_a ? side_a : side_b;
    const std::uint32_t other = grow_a ? side_b : side_a;
    next_.clear();
    for (NodeId x : front) {
      for (EdgeId f : g.incident(x)) {
        if (f == e || !l.contains(f)) continue;
        const NodeId y = g.other_end(f, x);
        auto& m = mark_[static_cast<std::size_t>(y)];
        if (m == other) return true;
        if (m != own) {
          m = own;
          next_.push_back(y);
        }
      }
    }
    front.swap(next_);
  }
  return false;
}

}  // namespace linkcomm
