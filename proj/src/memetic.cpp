#include "linkcomm/memetic.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "linkcomm/errors.hpp"
#include "linkcomm/move_index.hpp"
#include "linkcomm/parallel.hpp"

namespace linkcomm {

void EvolutionConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population size must be at least 2");
  if (num_evolutions < 1) throw std::invalid_argument("need at least one evolution");
  if (stagnation_limit < 1) throw std::invalid_argument("stagnation limit must be at least 1");
  if (!(mutation_rate > 0.0 && mutation_rate < 1.0)) throw std::invalid_argument("mutation rate must lie in (0, 1)");
  if (crossover_pairs < 0 || mutants_per_generation < 0 || max_consolidations < 0)
    throw std::invalid_argument("negative operator counts");
  if (validation_trials < 1) throw std::invalid_argument("need at least one validation trial");
}

LinkSet mutate(const LinkSet& l, double rate, Rng& rng) {
  const Graph& g = l.graph();
  const auto moves = candidate_moves(l);
  std::vector<EdgeId> picked;
  for (EdgeId e : moves.additions)
    if (rng.bernoulli(rate)) picked.push_back(e);
  for (EdgeId e : moves.removals)
    if (rng.bernoulli(rate)) picked.push_back(e);
  rng.shuffle(picked);

  LinkSet out = l;
  ConnectivityProbe probe(g);
  for (EdgeId e : picked) {
    const Edge& ed = g.edge(e);
    if (out.contains(e)) {
      if (out.size() >= 2 && probe.removal_keeps_connected(out, e)) out.remove(e);
    } else if ((out.attached(ed.a) || out.attached(ed.b)) && out.size() + 1 < g.num_edges()) {
      out.add(e);
    }
  }
  return out;
}

std::vector<LinkSet> crossover(const LinkSet& best, const LinkSet& partner) {
  std::vector<LinkSet> out;
  LinkSet meet = set_intersection(best, partner);
  if (!meet.empty()) out.push_back(is_connected(meet) ? std::move(meet) : largest_component(meet));
  LinkSet join = set_union(best, partner);
  if (join.size() < join.graph().num_edges() && is_connected(join)) out.push_back(std::move(join));
  return out;
}

namespace {

struct Individual {
  LinkSet links;
  double cost;
};

bool ranks_before(const Individual& x, const Individual& y) {
  if (x.cost != y.cost) return x.cost < y.cost;
  return x.links < y.links;
}

// Sort, drop repeated sets, keep the first `size`.
void select(std::vector<Individual>& pool, std::size_t size) {
  std::sort(pool.begin(), pool.end(), ranks_before);
  pool.erase(std::unique(pool.begin(), pool.end(), [](const Individual& x, const Individual& y) { return x.links == y.links; }),
             pool.end());
  if (pool.size() > size) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(size), pool.end());
}

// Equal-cost sets never displace the current best.
void keep_incumbent(std::vector<Individual>& pop, const LinkSet& incumbent) {
  auto it = std::find_if(pop.begin(), pop.end(), [&](const Individual& x) { return x.links == incumbent; });
  if (it != pop.end()) std::rotate(pop.begin(), it, it + 1);
}

bool contains_set(const std::vector<LinkSet>& v, const LinkSet& l) {
  return std::any_of(v.begin(), v.end(), [&](const LinkSet& x) { return x == l; });
}

bool searchable(const LinkSet& l) {
  return !l.empty() && l.size() < l.graph().num_edges() && is_connected(l);
}

struct EvolutionOutcome {
  Individual best;
  std::int64_t generations = 0;
  std::int64_t probes = 0;
  std::int64_t discarded = 0;
};

EvolutionOutcome run_evolution(std::vector<LinkSet> start, const EvolutionConfig& config, Rng& rng,
                               DescentCache* cache) {
  const Resolution& r = config.resolution;
  std::vector<Individual> pop;
  for (auto& l : start) {
    const double c = psi(l).value;
    pop.push_back({std::move(l), c});
  }
  const LinkSet first = pop.front().links;
  select(pop, static_cast<std::size_t>(config.population_size));
  if (!strictly_lower(pop.front().cost, psi(first).value)) keep_incumbent(pop, first);

  EvolutionOutcome out;
  int stagnant = 0;
  while (stagnant < config.stagnation_limit) {
    ++out.generations;
    const Individual best = pop.front();
    std::vector<LinkSet> starts;
    for (int i = 0; i < config.mutants_per_generation; ++i) starts.push_back(mutate(best.links, config.mutation_rate, rng));

    // partners by decreasing distance to the best, random order among ties
    std::vector<std::pair<std::int32_t, std::size_t>> partners;
    for (std::size_t i = 1; i < pop.size(); ++i) partners.push_back({symmetric_difference_size(best.links, pop[i].links), i});
    rng.shuffle(partners);
    std::stable_sort(partners.begin(), partners.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (int p = 0; p < config.crossover_pairs && static_cast<std::size_t>(p) < partners.size(); ++p)
      for (auto& child : crossover(best.links, pop[partners[static_cast<std::size_t>(p)].second].links))
        starts.push_back(std::move(child));

    std::vector<Individual> pool = pop;
    for (const auto& s : starts) {
      if (!searchable(s)) continue;
      ++out.probes;
      auto trace = invalidation_probe(best.links, s, r, cache);
      if (trace.outcome == Outcome::discarded) {
        ++out.discarded;
        continue;
      }
      pool.push_back({std::move(trace.best), trace.best_psi.value});
    }
    select(pool, static_cast<std::size_t>(config.population_size));
    pop = std::move(pool);
    if (strictly_lower(pop.front().cost, best.cost)) {
      stagnant = 0;
    } else {
      keep_incumbent(pop, best.links);
      ++stagnant;
    }
  }
  out.best = pop.front();
  return out;
}

}  // namespace

namespace {

// Population around an already descended seed.
std::vector<LinkSet> populate(const LinkSet& first, const EvolutionConfig& config, Rng& rng, DescentCache* cache) {
  const Resolution& r = config.resolution;
  std::vector<LinkSet> pop{first};
  const int max_attempts = 50 * config.population_size;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(pop.size()) < config.population_size; ++attempt) {
    LinkSet m = mutate(first, config.mutation_rate, rng);
    if (!searchable(m)) continue;
    auto trace = invalidation_probe(first, m, r, cache);
    if (trace.outcome == Outcome::discarded) continue;
    if (!contains_set(pop, trace.best)) pop.push_back(std::move(trace.best));
  }
  if (static_cast<int>(pop.size()) < config.population_size)
    warn("population shrunk to " + std::to_string(pop.size()) + " distinct individuals");
  std::vector<Individual> ranked;
  for (auto& l : pop) {
    const double c = psi(l).value;
    ranked.push_back({std::move(l), c});
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  if (!strictly_lower(ranked.front().cost, psi(first).value)) keep_incumbent(ranked, first);
  std::vector<LinkSet> out;
  for (auto& i : ranked) out.push_back(std::move(i.links));
  return out;
}

}  // namespace

std::vector<LinkSet> init_population(const LinkSet& seed, const EvolutionConfig& config, Rng& rng,
                                     DescentCache* cache) {
  return populate(tunneling_descent(seed, config.resolution, cache).best, config, rng, cache);
}

namespace {
std::uint64_t evolution_seed(const EvolutionConfig& config, const Fingerprint& fp, std::size_t index, int round) {
  return derive_seed({config.rng_seed, fp.lo, fp.hi, static_cast<std::uint64_t>(config.resolution.num()),
                      static_cast<std::uint64_t>(config.resolution.den()), index, static_cast<std::uint64_t>(round)});
}
}  // namespace

EvolveResult evolve(const LinkSet& seed, const EvolutionConfig& config, DescentCache* cache) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.num_evolutions);
  const Fingerprint fp = seed.fingerprint();
  EvolveResult result{seed, {}, 0, 0, false, 0, 0, 0, {}};
  std::vector<LinkSet> shared_start;
  // the seed's descent is deterministic, so all evolutions share it
  const LinkSet descended = tunneling_descent(seed, config.resolution, cache).best;

  for (int round = 0; round <= config.max_consolidations; ++round) {
    std::vector<std::optional<EvolutionOutcome>> outcomes(n);
    std::vector<double> seconds(n, 0.0);
    parallel_for(n, config.threads, [&](std::size_t i) {
      const auto t0 = std::chrono::steady_clock::now();
      Rng rng(evolution_seed(config, fp, i, round));
      std::vector<LinkSet> start = round == 0 ? populate(descended, config, rng, cache) : shared_start;
      outcomes[i] = run_evolution(std::move(start), config, rng, cache);
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    result.rounds = round + 1;
    result.evolution_seconds.insert(result.evolution_seconds.end(), seconds.begin(), seconds.end());

    std::vector<Individual> bests;
    for (auto& o : outcomes) {
      result.generations += o->generations;
      result.probes += o->probes;
      result.discarded += o->discarded;
      bests.push_back(o->best);
    }
    std::vector<Individual> ranked = bests;
    std::sort(ranked.begin(), ranked.end(), ranks_before);
    const Individual& top = ranked.front();
    result.best = top.links;
    result.agreement = static_cast<int>(
        std::count_if(bests.begin(), bests.end(), [&](const Individual& b) { return b.links == top.links; }));
    if (2 * static_cast<std::size_t>(result.agreement) >= n) {
      result.converged = true;
      break;
    }
    if (round == config.max_consolidations) {
      warn("evolutions did not agree after " + std::to_string(config.max_consolidations) +
           " consolidations; keeping the lowest-cost result");
      break;
    }
    select(ranked, static_cast<std::size_t>(config.population_size));
    shared_start.clear();
    for (auto& i : ranked) shared_start.push_back(i.links);
  }
  result.psi = psi(result.best);
  return result;
}

Verification verify_validity(const LinkSet& cluster, const EvolutionConfig& config, DescentCache* cache) {
  config.validate();
  Verification out;
  const auto descent = tunneling_descent(cluster, config.resolution, cache);
  if (descent.best != cluster) return out;
  const auto n = static_cast<std::size_t>(std::min(config.validation_trials, config.num_evolutions));
  const Fingerprint fp = cluster.fingerprint();
  std::vector<char> kept(n, 0);
  std::vector<double> seconds(n, 0.0);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(evolution_seed(config, fp, i, 0));
    auto outcome = run_evolution(populate(descent.best, config, rng, cache), config, rng, cache);
    kept[i] = outcome.best.links == cluster;
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  out.trials = static_cast<int>(n);
  out.valid = std::all_of(kept.begin(), kept.end(), [](char k) { return k != 0; });
  out.evolution_seconds = std::move(seconds);
  return out;
}

std::vector<const ClusterRecord*> ScheduleResult::final_clusters() const {
  std::vector<const ClusterRecord*> out;
  if (survivors.empty()) return out;
  for (auto id : survivors.back()) out.push_back(&records[id]);
  return out;
}

ScheduleResult run_schedule(const std::vector<Seed>& seeds, const std::vector<Resolution>& schedule,
                            const EvolutionConfig& config, DescentCache* cache) {
  if (seeds.empty()) throw std::invalid_argument("run_schedule needs at least one seed");
  if (schedule.empty()) throw std::invalid_argument("empty resolution schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i - 1] < schedule[i])) throw std::invalid_argument("schedule must be strictly increasing");

  ScheduleResult out;
  out.schedule = schedule;
  DescentCache local_cache;
  if (!cache) cache = &local_cache;

  auto prefix = [&](std::size_t level) {
    return std::vector<Resolution>(schedule.begin(), schedule.begin() + static_cast<std::ptrdiff_t>(level) + 1);
  };
  // Record for a set validated at `level`, created or revived as needed.
  auto record_for = [&](const LinkSet& links, std::size_t level, std::vector<std::size_t>& level_survivors) {
    std::size_t id = out.records.size();
    for (const auto& rec : out.records)
      if (rec.links == links) id = rec.id;
    if (id == out.records.size()) {
      ClusterRecord rec;
      rec.id = id;
      rec.links = links;
      rec.psi = psi(links);
      out.records.push_back(std::move(rec));
    }
    auto& rec = out.records[id];
    if (std::find(level_survivors.begin(), level_survivors.end(), id) == level_survivors.end()) {
      rec.valid_at = prefix(level);
      rec.invalidated_by.reset();
      rec.invalidated_at.reset();
      level_survivors.push_back(id);
    }
    return id;
  };

  for (std::size_t level = 0; level < schedule.size(); ++level) {
    EvolutionConfig cfg = config;
    cfg.resolution = schedule[level];
    std::vector<std::size_t> level_survivors;
    if (level == 0) {
      for (const auto& seed : seeds) {
        auto res = evolve(seed.links, cfg, cache);
        out.evolution_seconds.insert(out.evolution_seconds.end(), res.evolution_seconds.begin(), res.evolution_seconds.end());
        const auto id = record_for(res.best, level, level_survivors);
        out.records[id].provenance.push_back(seed.label + "@" + schedule[level].str());
      }
    } else {
      for (std::size_t id : out.survivors[level - 1]) {
        const LinkSet links = out.records[id].links;
        auto check = verify_validity(links, cfg, cache);
        out.evolution_seconds.insert(out.evolution_seconds.end(), check.evolution_seconds.begin(),
                                     check.evolution_seconds.end());
        if (check.valid) {
          record_for(links, level, level_survivors);
          continue;
        }
        auto res = evolve(links, cfg, cache);
        out.evolution_seconds.insert(out.evolution_seconds.end(), res.evolution_seconds.begin(), res.evolution_seconds.end());
        if (res.best == links) {
          record_for(links, level, level_survivors);
          continue;
        }
        const auto by = record_for(res.best, level, level_survivors);
        out.records[by].provenance.push_back("cluster " + std::to_string(id) + "@" + schedule[level].str());
        // a cluster already revalidated at this level by another path stays valid
        if (std::find(level_survivors.begin(), level_survivors.end(), id) != level_survivors.end()) continue;
        out.records[id].invalidated_by = by;
        out.records[id].invalidated_at = level;
        out.invalidations.push_back({level, id, by});
      }
    }
    std::sort(level_survivors.begin(), level_survivors.end());
    out.survivors.push_back(std::move(level_survivors));
  }
  return out;
}

std::vector<Seed> derive_secondary_seeds(const std::vector<LinkSet>& valid, const std::vector<Seed>& towns,
                                         const SecondarySeedRules& rules) {
  std::vector<Seed> out;
  auto emit = [&](LinkSet l, std::string label) {
    for (const auto& s : out)
      if (s.links == l) return;
    out.push_back({std::move(l), std::move(label)});
  };
  for (std::size_t i = 0; i < valid.size(); ++i) {
    for (std::size_t j = i + 1; j < valid.size(); ++j) {
      const std::string tag = std::to_string(i) + "," + std::to_string(j);
      LinkSet join = set_union(valid[i], valid[j]);
      if (join.size() < join.graph().num_edges() && is_connected(join)) emit(std::move(join), "union " + tag);
      LinkSet meet = set_intersection(valid[i], valid[j]);
      const double smaller = std::min(valid[i].size(), valid[j].size());
      if (meet.size() >= rules.min_intersection && meet.size() <= rules.max_intersection_share * smaller)
        emit(largest_component(meet), "intersection " + tag);
    }
  }
  for (std::size_t i = 0; i < valid.size(); ++i) {
    const auto& l = valid[i];
    const auto m = l.graph().num_edges();
    if (l.empty() || l.size() == m || l.size() < rules.min_complement_source * m) continue;
    LinkSet c = complement(l);
    if (is_connected(c)) emit(std::move(c), "complement " + std::to_string(i));
  }
  for (const auto& t : towns) {
    if (t.links.empty()) continue;
    emit(is_connected(t.links) ? t.links : largest_component(t.links), t.label);
  }
  return out;
}

}  // namespace linkcomm
