#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkcomm/link_set.hpp"
#include "linkcomm/local_search.hpp"
#include "linkcomm/psi.hpp"
#include "linkcomm/resolution.hpp"
#include "linkcomm/rng.hpp"

namespace linkcomm {

struct EvolutionConfig {
  int population_size = 8;
  int num_evolutions = 16;
  int stagnation_limit = 100;
  double mutation_rate = 0.05;  // per candidate move
  int crossover_pairs = 1;      // per generation
  int mutants_per_generation = 2;
  int max_consolidations = 5;
  // evolutions that must fail to improve a cluster before it counts as
  // valid at a further resolution level
  int validation_trials = 3;
  std::uint64_t rng_seed = 1;
  Resolution resolution{1, 20};
  unsigned threads = 1;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct Seed {
  LinkSet links;
  std::string label;
};

// Each candidate move of L is picked with probability `rate`; picked moves
// are applied in random order, skipping any that no longer apply or would
// disconnect L, empty it or complete E.
LinkSet mutate(const LinkSet& l, double rate, Rng& rng);

// Intersection (its largest component if disconnected, nothing if empty)
// and union (dropped if disconnected or equal to E), in that order.
std::vector<LinkSet> crossover(const LinkSet& best, const LinkSet& partner);

// Descent of the seed, then mutants of it, each descended under an
// invalidation probe against the first individual (discarded mutants do
// not count), until population_size distinct sets exist or
// 50 * population_size attempts are spent (then the population shrinks
// with a warning). Sorted by cost, best first.
std::vector<LinkSet> init_population(const LinkSet& seed, const EvolutionConfig& config, Rng& rng,
                                     DescentCache* cache = nullptr);

struct EvolveResult {
  LinkSet best;
  PsiScore psi;
  int rounds = 0;          // 1 + consolidations run
  int agreement = 0;       // evolutions of the last round returning `best`
  bool converged = false;  // agreement reached half of the evolutions
  std::int64_t generations = 0;
  std::int64_t probes = 0;
  std::int64_t discarded = 0;
  std::vector<double> evolution_seconds;
};

// Independent evolutions from the seed; rounds of consolidation restart all
// evolutions from the best distinct results until at least half of them
// agree on the best set.
EvolveResult evolve(const LinkSet& seed, const EvolutionConfig& config, DescentCache* cache = nullptr);

struct Verification {
  bool valid = false;
  int trials = 0;  // evolutions run; 0 when the plain descent already improves
  std::vector<double> evolution_seconds;
};

// Weak validity check: the cluster's own descent and the first
// validation_trials evolutions of evolve() all return it unchanged.
Verification verify_validity(const LinkSet& cluster, const EvolutionConfig& config, DescentCache* cache = nullptr);

struct ClusterRecord {
  std::size_t id = 0;
  LinkSet links;
  PsiScore psi;
  std::vector<Resolution> valid_at;  // a prefix of the schedule
  std::vector<std::string> provenance;
  std::optional<std::size_t> invalidated_by;
  std::optional<std::size_t> invalidated_at;  // schedule level
};

struct Invalidation {
  std::size_t level;
  std::size_t cluster;
  std::size_t by;
};

struct ScheduleResult {
  std::vector<Resolution> schedule;
  std::vector<ClusterRecord> records;
  std::vector<std::vector<std::size_t>> survivors;  // record ids per level
  std::vector<Invalidation> invalidations;
  std::vector<double> evolution_seconds;

  // Records valid at the last level.
  std::vector<const ClusterRecord*> final_clusters() const;
};

// Level 0 evolves every seed; each later level checks the previous level's
// survivors with verify_validity at the next resolution. A survivor that
// passes extends its validity; otherwise it is evolved in full and, unless
// that returns it unchanged, marked invalidated by the result.
ScheduleResult run_schedule(const std::vector<Seed>& seeds, const std::vector<Resolution>& schedule,
                            const EvolutionConfig& config, DescentCache* cache = nullptr);

struct SecondarySeedRules {
  std::int32_t min_intersection = 10;
  double max_intersection_share = 0.7;  // of the smaller cluster
  double min_complement_source = 0.2;   // cluster size as a share of m
};

// Connected pairwise unions, mid-sized pairwise intersections (largest
// component), complements of large clusters when connected, then towns.
std::vector<Seed> derive_secondary_seeds(const std::vector<LinkSet>& valid, const std::vector<Seed>& towns = {},
                                         const SecondarySeedRules& rules = {});

}  // namespace linkcomm
