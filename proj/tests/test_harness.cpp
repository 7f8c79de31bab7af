#include <omp.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "rhet/error.hpp"
#include "rhet/harness.hpp"

using namespace rhet;
namespace fs = std::filesystem;

namespace {

harness::GridConfig tiny() {
  auto g = harness::default_grid();
  g.scenarios = {1};
  g.beta_ratios = {2.0};
  g.odds_ratios = {10.0};
  g.replicates = 3;
  g.n = 200;
  g.workflow.n_perm = 199;
  g.workflow.forest.n_trees = 30;
  g.workflow.learner.forest.n_trees = 30;
  return g;
}

std::map<int, harness::Calibration> cal() { return {{1, harness::Calibration{1, 1.7274, 0.4402, 0.8}}}; }

harness::ReplicateRecord rec(double p, const std::vector<std::string>& q2, const std::vector<std::string>& q3,
                             harness::Case c = harness::Case::observed) {
  harness::ReplicateRecord r;
  r.scenario = 1;
  r.beta_ratio = 2;
  r.odds_ratio = 10;
  r.analysis_case = c;
  r.p_rv = r.p_ri = r.p_teh = p;
  r.q2_top5 = q2;
  r.q3_top5 = q3;
  r.top1_q2 = q2.empty() ? "" : q2.front();
  r.top1_q3 = q3.empty() ? "" : q3.front();
  for (const auto& a : q2)
    if (std::find(q3.begin(), q3.end(), a) != q3.end()) r.overlap.push_back(a);
  return r;
}

std::string slurp(const fs::path& p) { return io::read_file(p.string()); }

}  // namespace

TEST_CASE("replicate seeds are distinct across coordinates") {
  std::set<std::uint64_t> seen;
  for (int s : {1, 2})
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b)
        for (int r = 0; r < 20; ++r) seen.insert(harness::replicate_seed(1, s, a, b, r));
  CHECK(seen.size() == 2 * 5 * 5 * 20);
  CHECK(harness::replicate_seed(1, 1, 0, 0, 0) != harness::replicate_seed(2, 1, 0, 0, 0));
}

TEST_CASE("grid validation") {
  auto g = tiny();
  g.replicates = 0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK_THROWS_AS(harness::grid_from_json(io::Json::parse(R"({"nope": 1})")), ConfigError);
  const auto j = harness::grid_to_json(tiny());
  CHECK(harness::grid_to_json(harness::grid_from_json(j)) == j);
}

TEST_CASE("both cases share one dataset") {
  const auto g = tiny();
  const auto a = harness::replicate_dataset(g, cal().at(1), 0, 0, 1);
  const auto b = harness::replicate_dataset(g, cal().at(1), 0, 0, 1);
  CHECK(a.outcome == b.outcome);
  CHECK(a.size() == 200);
}

TEST_CASE("run_grid is deterministic across worker counts and resumes") {
  const auto dir = fs::temp_directory_path() / "rhet_test_grid";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto g1 = tiny();
  g1.workers = 1;
  harness::RunOptions o1;
  o1.results_path = (dir / "a.jsonl").string();
  const auto r1 = harness::run_grid(g1, cal(), o1);
  CHECK(r1.size() == 6);
  auto g2 = tiny();
  g2.workers = 3;
  harness::RunOptions o2;
  o2.results_path = (dir / "b.jsonl").string();
  harness::run_grid(g2, cal(), o2);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));

  // Truncate to the first two records plus half a line, then resume.
  const auto full = slurp(dir / "a.jsonl");
  std::size_t cut = full.find('\n', full.find('\n') + 1) + 1;
  io::write_file((dir / "c.jsonl").string(), full.substr(0, cut + 20));
  harness::RunOptions o3;
  o3.results_path = (dir / "c.jsonl").string();
  o3.resume = true;
  const auto r3 = harness::run_grid(g1, cal(), o3);
  CHECK(r3.size() == 6);
  CHECK(slurp(dir / "c.jsonl") == full);
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("record JSON round-trip") {
  auto r = rec(0.25, {"X11", "X3"}, {"X11"});
  r.seed = 0xfedcba9876543210ull;
  r.terminal = "T2";
  const auto back = harness::record_from_json(harness::record_to_json(r));
  CHECK(harness::record_to_json(back) == harness::record_to_json(r));
  CHECK(back.seed == r.seed);
}

TEST_CASE("targets per case") {
  using harness::Case;
  CHECK(harness::q2_targets(1, Case::observed) == std::vector<std::string>{"X11"});
  CHECK(harness::q2_targets(2, Case::observed) == std::vector<std::string>{"X14"});
  CHECK(harness::q2_targets(1, Case::unobserved).empty());
  CHECK(harness::q3_targets(2, Case::unobserved) == std::vector<std::string>{"X12", "X9", "Region"});
}

TEST_CASE("summary counts hits, overlap and profiles") {
  std::vector<harness::ReplicateRecord> rs{rec(0.5, {"X11", "X1"}, {"X11", "X2"}), rec(0.25, {"X1", "X11"}, {"X2"}),
                                           rec(0.125, {"X11"}, {"X3", "X11"}), rec(1.0, {"X4"}, {"X4"})};
  rs.back().ok = false;
  const auto s = harness::summarize(rs);
  REQUIRE(s.configs.size() == 1);
  const auto& c = s.configs[0];
  CHECK(c.n_ok == 3);
  CHECK(c.n_failed == 1);
  CHECK(c.q2_top1_hit == doctest::Approx(2.0 / 3));
  CHECK(c.q3_top1_hit == doctest::Approx(1.0 / 3));
  CHECK(c.overlap_recovery == doctest::Approx(2.0 / 3));
  CHECK(c.profiles.at("X1").q2_top5 == doctest::Approx(2.0 / 3));
  CHECK(c.profiles.at("X2").q3_top1 == doctest::Approx(1.0 / 3));
  CHECK(c.ecdf.at(harness::Family::p_rv) == std::vector<double>{0.125, 0.25, 0.5});
  CHECK(c.median_surprise.at(harness::Family::p_rv) == doctest::Approx(2.0));
  const auto csv = harness::hits_csv(s);
  CHECK(csv.find("1,observed,2,10,3,1,X11,X11,") != std::string::npos);
}

TEST_CASE("summary without a target reports NaN hit rates") {
  const auto s = harness::summarize({rec(0.5, {"X1"}, {"Region"}, harness::Case::unobserved)});
  CHECK(std::isnan(s.configs[0].q2_top1_hit));
  CHECK(s.configs[0].profiles.at("Region").q3_top1 == 1.0);
}

TEST_CASE("ks and median surprise helpers") {
  CHECK(harness::ks_uniform({0.5}) == doctest::Approx(0.5));
  CHECK(harness::median_surprise({0.5, 0.25, 0.125}) == doctest::Approx(2.0));
}
