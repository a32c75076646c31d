#include "linkcomm/local_search.hpp"

#include <algorithm>
#include <functional>

#include "linkcomm/errors.hpp"
#include "linkcomm/move_index.hpp"

namespace linkcomm {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::improved: return "improved";
    case Outcome::unchanged: return "unchanged";
    case Outcome::discarded: return "discarded";
  }
  return "?";
}

CandidateMoves candidate_moves(const LinkSet& l) {
  const Graph& g = l.graph();
  CandidateMoves out;
  ConnectivityProbe probe(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (!l.contains(e)) {
      if (l.attached(ed.a) || l.attached(ed.b)) out.additions.push_back(e);
    } else if (l.size() >= 2 && (l.boundary(ed.a) || l.boundary(ed.b)) && probe.removal_keeps_connected(l, e)) {
      out.removals.push_back(e);
    }
  }
  return out;
}

DescentCache::Key DescentCache::key(const LinkSet& l, const Resolution& r, Move phase) {
  return {l.fingerprint(), l.size(), r.num(), r.den(), phase};
}

std::optional<DescentCache::Failed> DescentCache::find(const LinkSet& l, const Resolution& r, Move phase) const {
  std::lock_guard lock(mutex_);
  auto it = map_.find(key(l, r, phase));
  if (it == map_.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void DescentCache::insert(const LinkSet& l, const Resolution& r, Move phase, Failed value) {
  std::lock_guard lock(mutex_);
  if (map_.size() >= max_entries_) map_.clear();
  map_.emplace(key(l, r, phase), value);
}

std::size_t DescentCache::size() const {
  std::lock_guard lock(mutex_);
  return map_.size();
}

namespace {

// Tracks the distance to the watched set and judges the first set that beats it.
struct Watch {
  const LinkSet* best;
  double best_value;
  std::int64_t radius;
  std::int64_t distance = 0;
  bool active = true;
  Outcome verdict = Outcome::unchanged;

  void toggled(const LinkSet& l, EdgeId e) {
    if (active) distance += l.contains(e) == best->contains(e) ? -1 : 1;
  }
  // True when the search must stop.
  bool visit(double value) {
    if (!active || !strictly_lower(value, best_value)) return false;
    active = false;
    verdict = distance <= radius ? Outcome::improved : Outcome::discarded;
    return verdict == Outcome::discarded;
  }
};

class Descent {
 public:
  Descent(const LinkSet& start, const Resolution& r, DescentCache* cache, Watch* watch)
      : l_(start), index_(l_), connectivity_(start.graph()), r_(r), cache_(cache), watch_(watch) {
    keeps_connected_ = [this](EdgeId e) { return connectivity_.removal_keeps_connected(l_, e); };
  }

  void run() {
    min_value_ = psi(l_).value;
    if (watch_ && watch_->visit(min_value_)) {
      aborted_ = true;
      return;
    }
    Move phase = Move::remove;
    int failures = 0;
    while (failures < 2) {
      const bool improved = run_phase(phase);
      if (aborted_) return;
      failures = improved ? 0 : failures + 1;
      phase = phase == Move::remove ? Move::add : Move::remove;
    }
  }

  const LinkSet& current() const { return l_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t tunnel() const { return tunnel_; }

 private:
  void apply(EdgeId e) {
    l_.toggle(e);
    index_.on_toggle(l_, e);
    if (watch_) watch_->toggled(l_, e);
  }

  bool run_phase(Move dir) {
    if (cache_) {
      if (auto hit = cache_->find(l_, r_, dir)) {
        steps_ += hit->steps;
        tunnel_ = std::max(tunnel_, hit->tunnel);
        return false;
      }
    }
    undo_.clear();
    std::int64_t budget = r_.radius(l_.size());
    std::int64_t since = 0;
    std::int64_t taken = 0;
    bool improved = false;
    while (true) {
      const auto e = dir == Move::add ? index_.best_addition(l_) : index_.best_removal(l_, keeps_connected_);
      if (!e) break;
      apply(*e);
      undo_.push_back(*e);
      ++taken;
      const double value = psi(l_).value;
      if (watch_ && watch_->visit(value)) {
        steps_ += taken;
        aborted_ = true;
        return false;
      }
      if (strictly_lower(value, min_value_)) {
        min_value_ = value;
        undo_.clear();
        since = 0;
        improved = true;
        budget = r_.radius(l_.size());
      } else if (++since >= budget) {
        break;
      }
    }
    for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) apply(*it);
    undo_.clear();
    steps_ += taken;
    tunnel_ = improved ? since : std::max(tunnel_, since);
    if (!improved && cache_) cache_->insert(l_, r_, dir, {taken, since});
    return improved;
  }

  LinkSet l_;
  MoveIndex index_;
  ConnectivityProbe connectivity_;
  Resolution r_;
  DescentCache* cache_;
  Watch* watch_;
  std::function<bool(EdgeId)> keeps_connected_;
  std::vector<EdgeId> undo_;
  double min_value_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t tunnel_ = 0;
  bool aborted_ = false;
};

void check_start(const LinkSet& l) {
  if (l.empty()) throw ContractError("descent needs a nonempty link set");
  if (l.size() == l.graph().num_edges()) throw ContractError("descent cannot start from the full edge set");
  if (!is_connected(l)) throw ContractError("descent needs a connected link set");
}

}  // namespace

SearchTrace tunneling_descent(const LinkSet& l0, const Resolution& r, DescentCache* cache) {
  check_start(l0);
  Descent d(l0, r, cache, nullptr);
  d.run();
  SearchTrace t{l0, d.current(), psi(d.current()), d.steps(), d.tunnel(), Outcome::unchanged};
  if (!(t.best == l0)) t.outcome = Outcome::improved;
  return t;
}

SearchTrace invalidation_probe(const LinkSet& best, const LinkSet& start, const Resolution& r, DescentCache* cache) {
  check_start(start);
  Watch watch{&best, psi(best).value, r.radius(best.size())};
  watch.distance = symmetric_difference_size(best, start);
  Descent d(start, r, cache, &watch);
  d.run();
  return {start, d.current(), psi(d.current()), d.steps(), d.tunnel(), watch.verdict};
}

}  // namespace linkcomm
