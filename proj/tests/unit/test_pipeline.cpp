#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linkcomm/bench.hpp"
#include "linkcomm/errors.hpp"
#include "linkcomm/pipeline.hpp"

using namespace linkcomm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("linkcomm_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig quick(const fs::path& input, const fs::path& out) {
  RunConfig c;
  c.input = input.string();
  c.out_dir = out.string();
  c.evolution.num_evolutions = 2;
  c.evolution.population_size = 3;
  c.evolution.stagnation_limit = 5;
  c.evolution.mutation_rate = 0.2;
  c.evolution.validation_trials = 1;
  return c;
}

}  // namespace

TEST_CASE("two-triangle toy end to end") {
  const auto dir = scratch("toy");
  std::ofstream(dir / "toy.txt") << "a\tb\nb\tc\nc\ta\nc\td\nd\te\ne\tf\nf\td\n";
  auto c = quick(dir / "toy.txt", dir / "out");
  c.graph_kind = GraphKind::plain;
  c.seed_mode = SeedMode::links;
  set_warnings_enabled(false);
  const auto result = run_pipeline(c);
  set_warnings_enabled(true);
  bool triangle = false;
  for (const auto& l : result.clusters) {
    if (l.size() != 3) continue;
    triangle = true;
    CHECK(psi(l).value == doctest::Approx(7.0 / 36).epsilon(1e-12));
  }
  CHECK(triangle);
  // id,origin,links,psi,escape_probability
  std::istringstream csv(slurp(dir / "out" / "final_clusters.csv"));
  std::string line;
  std::getline(csv, line);
  bool listed = false;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::istringstream row(line);
    for (std::string x; std::getline(row, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 5);
    if (f[2] == "3") listed = listed || std::abs(std::stod(f[3]) - 7.0 / 36) < 1e-12;
  }
  CHECK(listed);
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "FAILED"));
}

TEST_CASE("input that prunes to nothing fails in the load stage") {
  const auto dir = scratch("empty");
  std::ofstream(dir / "in.tsv") << "p1\ts1\np2\ts2\n";
  try {
    run_pipeline(quick(dir / "in.tsv", dir / "out"));
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "load");
  }
  CHECK(fs::exists(dir / "out" / "FAILED"));
  CHECK(slurp(dir / "out" / "manifest.json").find("\"failed\"") != std::string::npos);
}

TEST_CASE("config checks") {
  RunConfig c;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // no input
  c.input = "x";
  CHECK_NOTHROW(c.validate());
  c.seed_mode = SeedMode::explicit_sources;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.seed_mode = SeedMode::ward;
  c.graph_kind = GraphKind::plain;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.input = "x";
  c.schedule = {Resolution(1, 5), Resolution(1, 10)};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_mode("nope"), std::invalid_argument);
}

TEST_CASE("manifest round trip and byte-identical reruns") {
  const auto dir = scratch("rerun");
  PlantedSpec spec;
  spec.num_sources = 24;
  spec.num_papers = 150;
  spec.citations_per_paper = 4;
  const auto planted = generate_planted(spec);
  {
    std::ofstream out(dir / "in.tsv");
    for (const auto& e : planted.graph.edges())
      out << bare_id(planted.graph.name(e.a)) << '\t' << bare_id(planted.graph.name(e.b)) << '\n';
  }
  auto c = quick(dir / "in.tsv", dir / "a");
  c.ward_seeds = 4;
  set_warnings_enabled(false);
  const auto first = run_pipeline(c);
  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  RunConfig again = RunConfig::from_json(manifest.at("config"));
  CHECK(again.to_json() == c.to_json());
  again.out_dir = (dir / "b").string();
  again.evolution.threads = 3;
  const auto second = run_pipeline(again);
  set_warnings_enabled(true);
  CHECK(first.manifest_hash == second.manifest_hash);
  for (const char* f : {"clusters.csv", "clusters.json", "final_clusters.csv", "final_clusters.json", "membership.csv",
                        "invalidations.csv", "seeds.json", "dendrogram.json", "matches.csv"}) {
    INFO(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  CHECK(first.clusters == second.clusters);
}

TEST_CASE("explicit seeds file") {
  const auto dir = scratch("explicit");
  std::ofstream(dir / "in.tsv") << "p1\ts1\np1\ts2\np2\ts1\np2\ts2\np3\ts2\np3\ts3\np4\ts3\np4\ts4\np5\ts3\np5\ts4\n";
  std::ofstream(dir / "seeds.txt") << "# one per line\ns1, s2\ns4\n";
  CHECK(read_seed_file((dir / "seeds.txt").string()) == std::vector<std::vector<std::string>>{{"s1", "s2"}, {"s4"}});
  auto c = quick(dir / "in.tsv", dir / "out");
  c.seed_mode = SeedMode::explicit_sources;
  c.seeds_file = (dir / "seeds.txt").string();
  set_warnings_enabled(false);
  CHECK_NOTHROW(run_pipeline(c));
  std::ofstream(dir / "bad.txt") << "s9\n";
  c.seeds_file = (dir / "bad.txt").string();
  CHECK_THROWS_AS(run_pipeline(c), StageError);
  set_warnings_enabled(true);
}

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
