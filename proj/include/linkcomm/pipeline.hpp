#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkcomm/analysis.hpp"
#include "linkcomm/memetic.hpp"
#include "linkcomm/resolution.hpp"
#include "linkcomm/seeds.hpp"

namespace linkcomm {

// links: every single link is a seed (small graphs).
enum class SeedMode { ward, explicit_sources, secondary, towns, links };
enum class GraphKind { citation, plain };

const char* seed_mode_name(SeedMode m);
SeedMode parse_seed_mode(const std::string& s);

struct RunConfig {
  std::string input;
  // plain: general undirected edge list; no pruning, no source analyses
  GraphKind graph_kind = GraphKind::citation;
  std::vector<Resolution> schedule = standard_schedule();
  EvolutionConfig evolution;
  SeedMode seed_mode = SeedMode::ward;
  std::string seeds_file;  // explicit mode: one seed per line, source ids
  std::int32_t ward_seeds = 27;
  BranchOptions branches;
  MembershipThresholds membership;
  double alpha = 0.05;
  std::string out_dir = "out";

  // Throws std::invalid_argument.
  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

// Error raised inside a named stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  std::filesystem::path out_dir;
  std::shared_ptr<const Graph> graph;  // declared first: outlives the clusters
  std::vector<LinkSet> clusters;       // final clusters, as in final_clusters.csv
  std::string manifest_hash;
};

// Runs load, projection, seeds, cluster, (secondary), cplc and analyze,
// writing artifacts and manifest.json into out_dir. On failure the partial
// outputs stay, a FAILED file names the stage, and StageError is thrown.
PipelineResult run_pipeline(const RunConfig& config);

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const std::filesystem::path& p);

// Reads seeds for explicit mode: one seed per line, source ids separated by
// whitespace or commas; '#' starts a comment.
std::vector<std::vector<std::string>> read_seed_file(const std::string& path);

}  // namespace linkcomm
