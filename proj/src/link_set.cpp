#include "linkcomm/link_set.hpp"

#include <algorithm>
#include <bit>

#include "linkcomm/errors.hpp"

namespace linkcomm {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t node_term(std::int64_t k, std::int64_t degree) { return k * (degree - k); }
}  // namespace

Fingerprint edge_key(EdgeId e) {
  const auto x = static_cast<std::uint64_t>(e);
  return {splitmix64(x * 2 + 0x51ed27), splitmix64(x * 2 + 1 + 0xa3b195)};
}

LinkSet::LinkSet(const Graph& g)
    : graph_(&g),
      words_((static_cast<std::size_t>(g.num_edges()) + 63) / 64, 0),
      k_in_(static_cast<std::size_t>(g.num_nodes()), 0),
      class_sum_(g.degree_classes().size(), 0) {}

LinkSet LinkSet::of(const Graph& g, std::span<const EdgeId> edges) {
  LinkSet l(g);
  for (EdgeId e : edges)
    if (!l.contains(e)) l.add(e);
  return l;
}

LinkSet LinkSet::all(const Graph& g) {
  LinkSet l(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e) l.add(e);
  return l;
}

void LinkSet::shift_node(NodeId x, std::int32_t delta) {
  auto& k = k_in_[static_cast<std::size_t>(x)];
  const std::int64_t degree = graph_->degree(x);
  auto& sum = class_sum_[static_cast<std::size_t>(graph_->degree_class(x))];
  sum -= node_term(k, degree);
  k += delta;
  sum += node_term(k, degree);
}

void LinkSet::add(EdgeId e) {
  if (contains(e)) throw ContractError("edge already in link set");
  words_[static_cast<std::size_t>(e) >> 6] |= std::uint64_t{1} << (static_cast<unsigned>(e) & 63U);
  const Edge& ed = graph_->edge(e);
  shift_node(ed.a, 1);
  shift_node(ed.b, 1);
  ++size_;
  const Fingerprint key = edge_key(e);
  fingerprint_.lo ^= key.lo;
  fingerprint_.hi ^= key.hi;
}

void LinkSet::remove(EdgeId e) {
  if (!contains(e)) throw ContractError("edge not in link set");
  words_[static_cast<std::size_t>(e) >> 6] &= ~(std::uint64_t{1} << (static_cast<unsigned>(e) & 63U));
  const Edge& ed = graph_->edge(e);
  shift_node(ed.a, -1);
  shift_node(ed.b, -1);
  --size_;
  const Fingerprint key = edge_key(e);
  fingerprint_.lo ^= key.lo;
  fingerprint_.hi ^= key.hi;
}

std::vector<EdgeId> LinkSet::edges() const {
  std::vector<EdgeId> out;
  out.reserve(static_cast<std::size_t>(size_));
  for_each_edge([&](EdgeId e) { out.push_back(e); });
  return out;
}

double LinkSet::sigma() const {
  const auto degrees = graph_->degree_classes();
  double s = 0.0;
  for (std::size_t c = 0; c < class_sum_.size(); ++c)
    if (class_sum_[c] != 0) s += static_cast<double>(class_sum_[c]) / degrees[c];
  return s;
}

double LinkSet::sigma_shifted(std::int32_t class_a, std::int64_t delta_a, std::int32_t class_b,
                              std::int64_t delta_b) const {
  const auto degrees = graph_->degree_classes();
  double s = 0.0;
  for (std::size_t c = 0; c < class_sum_.size(); ++c) {
    std::int64_t v = class_sum_[c];
    if (static_cast<std::int32_t>(c) == class_a) v += delta_a;
    if (static_cast<std::int32_t>(c) == class_b) v += delta_b;
    if (v != 0) s += static_cast<double>(v) / degrees[c];
  }
  return s;
}

bool LinkSet::cache_consistent() const {
  std::vector<std::int32_t> k(k_in_.size(), 0);
  std::int32_t count = 0;
  Fingerprint fp;
  for_each_edge([&](EdgeId e) {
    ++k[static_cast<std::size_t>(graph_->edge(e).a)];
    ++k[static_cast<std::size_t>(graph_->edge(e).b)];
    ++count;
    const Fingerprint key = edge_key(e);
    fp.lo ^= key.lo;
    fp.hi ^= key.hi;
  });
  std::vector<std::int64_t> sums(class_sum_.size(), 0);
  for (NodeId x = 0; x < graph_->num_nodes(); ++x) {
    const auto kx = k[static_cast<std::size_t>(x)];
    if (kx < 0 || kx > graph_->degree(x)) return false;
    sums[static_cast<std::size_t>(graph_->degree_class(x))] += node_term(kx, graph_->degree(x));
  }
  return k == k_in_ && count == size_ && sums == class_sum_ && fp == fingerprint_;
}

std::strong_ordering operator<=>(const LinkSet& a, const LinkSet& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    const std::uint64_t lowest = diff & (~diff + 1);
    return (a.words_[w] & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

namespace {
template <class Op>
LinkSet combine(const LinkSet& a, const LinkSet& b, Op op) {
  if (&a.graph() != &b.graph()) throw ContractError("link sets belong to different graphs");
  std::vector<EdgeId> members;
  const auto wa = a.words(), wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) {
    std::uint64_t bits = op(wa[w], wb[w]);
    while (bits) {
      members.push_back(static_cast<EdgeId>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))));
      bits &= bits - 1;
    }
  }
  return LinkSet::of(a.graph(), members);
}
}  // namespace

std::int32_t intersection_size(const LinkSet& a, const LinkSet& b) {
  std::int32_t n = 0;
  const auto wa = a.words(), wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) n += std::popcount(wa[w] & wb[w]);
  return n;
}

std::int32_t symmetric_difference_size(const LinkSet& a, const LinkSet& b) {
  std::int32_t n = 0;
  const auto wa = a.words(), wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) n += std::popcount(wa[w] ^ wb[w]);
  return n;
}

LinkSet set_union(const LinkSet& a, const LinkSet& b) {
  return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; });
}
LinkSet set_intersection(const LinkSet& a, const LinkSet& b) {
  return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & y; });
}
LinkSet set_difference(const LinkSet& a, const LinkSet& b) {
  return combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

LinkSet complement(const LinkSet& l) {
  const Graph& g = l.graph();
  if (l.empty()) throw DomainError("complement of the empty link set is E; cost undefined");
  if (l.size() == g.num_edges()) throw DomainError("complement of E is empty; cost undefined");
  LinkSet out(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (!l.contains(e)) out.add(e);
  return out;
}

std::vector<LinkSet> components(const LinkSet& l) {
  const Graph& g = l.graph();
  std::vector<char> seen_edge(static_cast<std::size_t>(g.num_edges()), 0);
  std::vector<LinkSet> out;
  std::vector<NodeId> stack;
  l.for_each_edge([&](EdgeId start) {
    if (seen_edge[static_cast<std::size_t>(start)]) return;
    std::vector<EdgeId> members{start};
    seen_edge[static_cast<std::size_t>(start)] = 1;
    stack = {g.edge(start).a, g.edge(start).b};
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      for (EdgeId f : g.incident(x)) {
        if (!l.contains(f) || seen_edge[static_cast<std::size_t>(f)]) continue;
        seen_edge[static_cast<std::size_t>(f)] = 1;
        members.push_back(f);
        stack.push_back(g.other_end(f, x));
      }
    }
    out.push_back(LinkSet::of(g, members));
  });
  // Discovery order is by smallest member edge already; stable sort keeps it for ties.
  std::stable_sort(out.begin(), out.end(), [](const LinkSet& a, const LinkSet& b) { return a.size() > b.size(); });
  return out;
}

bool is_connected(const LinkSet& l) {
  if (l.empty()) return false;
  const Graph& g = l.graph();
  std::vector<char> seen(static_cast<std::size_t>(g.num_nodes()), 0);
  const EdgeId start = l.edges().front();
  std::vector<NodeId> stack{g.edge(start).a};
  seen[static_cast<std::size_t>(g.edge(start).a)] = 1;
  std::int64_t reached = 0;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    reached += l.internal_degree(x);
    for (EdgeId f : g.incident(x)) {
      if (!l.contains(f)) continue;
      const NodeId y = g.other_end(f, x);
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        stack.push_back(y);
      }
    }
  }
  return reached == l.internal_degree();
}

LinkSet largest_component(const LinkSet& l) {
  if (l.empty()) return l;
  return components(l).front();
}

}  // namespace linkcomm
