#include <cmath>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "rhet/error.hpp"
#include "rhet/io.hpp"
#include "rhet/manifest.hpp"
#include "rhet/rng.hpp"

using namespace rhet;
namespace fs = std::filesystem;

namespace {

datagen::TrialDataset small_trial(std::uint64_t seed = 2) {
  return datagen::generate_trial(datagen::default_schema(1), datagen::worked_example_spec(),
                                 datagen::region_spec_for(10.0), 80, seed);
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("rhet_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  Rng r(1);
  for (int i = 0; i < 2000; ++i) {
    const double v = (r.uniform() - 0.5) * std::pow(10.0, static_cast<int>(r.below(40)) - 20);
    CHECK(io::parse_double(io::format_double(v), "v") == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")), "v")));
  CHECK(io::parse_double("inf", "v") == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(io::parse_double("1.5x", "v"), DataError);
}

TEST_CASE("dataset CSV and schema round-trip") {
  const auto d = datagen::mask_covariates(small_trial(), {"X11"});
  const auto dir = temp_dir("roundtrip");
  io::write_dataset(d, (dir / "d.csv").string(), (dir / "d.schema.json").string());
  const auto back = io::read_dataset((dir / "d.csv").string(), (dir / "d.schema.json").string());
  CHECK(back.size() == d.size());
  CHECK(back.outcome == d.outcome);
  CHECK(back.treatment == d.treatment);
  CHECK(back.region == d.region);
  CHECK(back.analysis_mask == d.analysis_mask);
  for (std::size_t j = 0; j < d.covariates.cols(); ++j) {
    CHECK(back.covariates.col(j).name == d.covariates.col(j).name);
    CHECK(back.covariates.col(j).kind == d.covariates.col(j).kind);
    CHECK(back.covariates.col(j).values == d.covariates.col(j).values);
  }
  CHECK(io::dataset_csv(back) == io::dataset_csv(d));
}

TEST_CASE("CSV errors name the line") {
  const auto d = small_trial();
  const io::SchemaFile sf = io::schema_from_json(io::schema_to_json(d));
  auto text = io::dataset_csv(d);
  const auto second = text.find('\n', text.find('\n') + 1);
  auto bad = text.substr(0, second + 1) + "garbage\n";
  try {
    io::parse_dataset_csv(bad, sf);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_dataset_csv("X1,Z\n", sf), DataError);
}

TEST_CASE("config JSON overrides and rejects unknown keys") {
  workflow::WorkflowConfig base;
  const auto c = io::config_from_json(io::Json::parse(R"({"n_perm": 999, "forest": {"n_trees": 50}})"), base);
  CHECK(c.n_perm == 999);
  CHECK(c.forest.n_trees == 50);
  CHECK(c.k_folds == base.k_folds);
  CHECK_THROWS_AS(io::config_from_json(io::Json::parse(R"({"bogus": 1})"), base), ConfigError);
  const auto j = io::config_to_json(c);
  CHECK(io::config_to_json(io::config_from_json(j, {})) == j);
}

TEST_CASE("workflow report JSON round-trip") {
  workflow::WorkflowConfig cfg;
  cfg.n_perm = 199;
  cfg.forest.n_trees = 30;
  cfg.learner.forest.n_trees = 30;
  const auto rep = workflow::run_workflow(small_trial(5), cfg);
  const auto j = io::report_to_json(rep);
  const auto back = io::report_from_json(j);
  CHECK(back.p_rv.p_value == rep.p_rv.p_value);
  CHECK(back.q3_ranking.order == rep.q3_ranking.order);
  CHECK(back.q3_ranking.scores == rep.q3_ranking.scores);
  CHECK(back.overlap == rep.overlap);
  CHECK(back.decision.terminal == rep.decision.terminal);
  CHECK(back.q4_displays.size() == rep.q4_displays.size());
  CHECK(io::report_to_json(back).dump() == j.dump());
}

TEST_CASE("sha256 and manifest digests") {
  CHECK(manifest::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = temp_dir("manifest");
  io::write_file((dir / "a.txt").string(), "abc");
  manifest::RunManifest m;
  m.subcommand = "x";
  m.add_output((dir / "a.txt").string());
  const auto j = m.to_json();
  CHECK(j["outputs"][0]["sha256"] == manifest::sha256_hex("abc"));
  CHECK(j["tool_version"] == manifest::tool_version);
}
