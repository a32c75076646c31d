#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "linkcomm/link_set.hpp"
#include "linkcomm/psi.hpp"
#include "linkcomm/resolution.hpp"

namespace linkcomm {

enum class Outcome : std::uint8_t { improved, unchanged, discarded };
const char* outcome_name(Outcome o);

struct SearchTrace {
  LinkSet start;
  LinkSet best;
  PsiScore best_psi;
  std::int64_t steps = 0;           // forward moves taken, tunnels included
  std::int64_t tunneled_steps = 0;  // longest abandoned tunnel out of the final minimum
  Outcome outcome = Outcome::unchanged;
};

struct CandidateMoves {
  std::vector<EdgeId> additions;  // ascending edge id
  std::vector<EdgeId> removals;
};

// Additions: edges outside L sharing a node with L. Removals: edges of L at
// a boundary node whose deletion leaves L connected and nonempty.
CandidateMoves candidate_moves(const LinkSet& l);

// Remembers phases that failed to improve on a given minimum. A phase is a
// pure function of (L_min, r, direction), so replaying the stored step
// counts gives the same trace as rerunning it. Shared between threads.
class DescentCache {
 public:
  struct Failed {
    std::int64_t steps = 0;
    std::int64_t tunnel = 0;
  };
  explicit DescentCache(std::size_t max_entries = 1 << 20) : max_entries_(max_entries) {}

  std::optional<Failed> find(const LinkSet& l, const Resolution& r, Move phase) const;
  void insert(const LinkSet& l, const Resolution& r, Move phase, Failed value);
  std::size_t size() const;
  std::uint64_t hits() const { return hits_.load(); }

 private:
  struct Key {
    Fingerprint fp;
    std::int32_t size;
    std::int64_t num;
    std::int64_t den;
    Move phase;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return static_cast<std::size_t>(k.fp.lo ^ (k.fp.hi >> 7)); }
  };
  static Key key(const LinkSet& l, const Resolution& r, Move phase);

  std::size_t max_entries_;
  mutable std::mutex mutex_;
  std::unordered_map<Key, Failed, KeyHash> map_;
  mutable std::atomic<std::uint64_t> hits_{0};
};

// Greedy descent alternating exclusion and inclusion phases (exclusion
// first). A phase keeps taking the cheapest move even uphill, gives up after
// ceil(r |L_min|) consecutive moves without beating L_min and returns to
// L_min. Stops when two consecutive phases fail. Throws ContractError if L0
// is empty or disconnected.
SearchTrace tunneling_descent(const LinkSet& l0, const Resolution& r, DescentCache* cache = nullptr);

// Descent from `start` watched against `best`: the first visited set with
// lower cost than `best` decides. Within ceil(r |best|) links of `best` it
// invalidates `best` (improved; the descent then runs to its minimum);
// farther away the probe stops (discarded). No such set: unchanged.
SearchTrace invalidation_probe(const LinkSet& best, const LinkSet& start, const Resolution& r,
                               DescentCache* cache = nullptr);

}  // namespace linkcomm
