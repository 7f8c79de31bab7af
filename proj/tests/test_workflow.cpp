#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rhet/datagen.hpp"
#include "rhet/nuisance.hpp"
#include "rhet/rng.hpp"
#include "rhet/smooth.hpp"
#include "rhet/stats.hpp"
#include "rhet/workflow.hpp"

using namespace rhet;

namespace {

workflow::WorkflowConfig quick() {
  workflow::WorkflowConfig c;
  c.n_perm = 499;
  c.forest.n_trees = 100;
  c.learner.forest.n_trees = 100;
  return c;
}

datagen::TrialDataset example() {
  return datagen::generate_trial(datagen::default_schema(1), datagen::worked_example_spec(),
                                 datagen::region_spec_for(10.0), 500, datagen::running_example_seed);
}

}  // namespace

TEST_CASE("pseudo-outcome formula") {
  CHECK(nuisance::dr_pseudo_outcome(1, 3.0, 0.5, 1.0, 2.0) == doctest::Approx(2.0 * 1.0 + 1.0));
  CHECK(nuisance::dr_pseudo_outcome(0, 3.0, 0.5, 1.0, 2.0) == doctest::Approx(-2.0 * 2.0 + 1.0));
}

TEST_CASE("cross-fit folds are balanced within each arm") {
  std::vector<int> z(103);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = i % 3 == 0;
  const auto plan = nuisance::make_plan(z, 5, 4);
  std::vector<int> c0(5), c1(5);
  for (std::size_t i = 0; i < z.size(); ++i) (z[i] ? c1 : c0)[plan.fold[i]]++;
  CHECK(*std::max_element(c0.begin(), c0.end()) - *std::min_element(c0.begin(), c0.end()) <= 1);
  CHECK(*std::max_element(c1.begin(), c1.end()) - *std::min_element(c1.begin(), c1.end()) <= 1);
  CHECK(nuisance::make_plan(z, 5, 4).fold == plan.fold);
}

TEST_CASE("interaction model equals the cell-mean contrasts") {
  Rng r(3);
  std::vector<double> y(400);
  std::vector<int> z(400), g(400);
  for (int i = 0; i < 400; ++i) {
    z[i] = r.below(2);
    g[i] = r.below(5) == 0;
    y[i] = 1 + 0.5 * z[i] - g[i] + 0.7 * z[i] * g[i] + r.normal();
  }
  const auto est = workflow::fit_interaction_model(y, z, g);
  REQUIRE(est.size() == 2);
  for (int region = 0; region < 2; ++region) {
    double s[2] = {0, 0};
    int n[2] = {0, 0};
    for (int i = 0; i < 400; ++i)
      if (g[i] == region) {
        s[z[i]] += y[i];
        ++n[z[i]];
      }
    CHECK(std::fabs(est[region].estimate - (s[1] / n[1] - s[0] / n[0])) < 1e-10);
    CHECK(est[region].n == static_cast<std::size_t>(n[0] + n[1]));
    CHECK(est[region].lower < est[region].estimate);
  }
}

TEST_CASE("smoother recovers a linear function") {
  Rng r(9);
  std::vector<double> x(500), y(500);
  for (int i = 0; i < 500; ++i) {
    x[i] = r.uniform();
    y[i] = 1.0 - 2.0 * x[i] + 0.05 * r.normal();
  }
  const auto c = smooth::smooth_phi(y, x, 100);
  CHECK(c.points.size() == 100);
  double worst = 0;
  for (const auto& p : c.points) {
    worst = std::max(worst, std::fabs(p.fit - (1.0 - 2.0 * p.x)));
    CHECK(p.lower <= p.fit);
    CHECK(p.upper >= p.fit);
  }
  CHECK(worst < 0.05);
}

TEST_CASE("B-spline basis is a partition of unity") {
  for (double x : {0.0, 0.13, 0.5, 0.999, 1.0}) {
    const auto b = smooth::bspline_basis(x, 0.0, 1.0, 10);
    CHECK(b.size() == 13);
    double s = 0;
    for (double v : b) {
      CHECK(v >= -1e-15);
      s += v;
    }
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("overlap set ordering") {
  const auto q2 = forest::make_ranking({"a", "b", "c", "d", "e", "f"}, {6, 5, 4, 3, 2, 1});
  const auto q3 = forest::make_ranking({"a", "b", "c", "d", "e", "f", "Region"}, {1, 6, 2, 5, 0, 3, 4});
  CHECK(workflow::overlap_set(q2, q3, 3) == std::vector<std::string>{"b"});
  CHECK(workflow::overlap_set(q2, q3, 5) == std::vector<std::string>{"b", "d", "c"});
}

TEST_CASE("roadmap terminals") {
  workflow::Thresholds th;
  const auto q2 = forest::make_ranking({"a", "b", "c"}, {1.0, 0.1, 0.0});
  const auto q3 = forest::make_ranking({"a", "b", "c", "Region"}, {1.0, 0.1, 0.0, 0.2});
  CHECK(workflow::decide_terminal(0.5, 0.01, 0.01, {"a"}, q2, q3, 100, th).terminal == workflow::Terminal::T1);
  CHECK(workflow::decide_terminal(0.01, 0.01, 0.01, {"a"}, q2, q3, 100, th).terminal == workflow::Terminal::T2);
  CHECK(workflow::decide_terminal(0.1, 0.01, 0.01, {"a"}, q2, q3, 100, th).terminal == workflow::Terminal::T3);
  CHECK(workflow::decide_terminal(0.01, 0.5, 0.5, {}, q2, q3, 100, th).terminal == workflow::Terminal::T4);
  CHECK(workflow::decide_terminal(0.1, 0.5, 0.5, {}, q2, q3, 30, th).terminal == workflow::Terminal::T5);
  const auto q3r = forest::make_ranking({"a", "b", "c", "Region"}, {1.0, 0.1, 0.0, 2.0});
  CHECK(workflow::decide_terminal(0.01, 0.01, 0.01, {"a"}, q2, q3r, 100, th).terminal == workflow::Terminal::T3);
  CHECK(!workflow::decide_terminal(0.01, 0.01, 0.01, {"a"}, q2, q3, 100, th).rationale.empty());
}

TEST_CASE("zero-effect pseudo-outcomes average to zero") {
  auto spec = datagen::scenario_spec(1);
  spec.s = 1.7;
  spec.beta0 = 0.0;
  spec.beta1 = 0.0;
  spec.beta1_star = 1.0;
  nuisance::LearnerParams lp;
  lp.forest.n_trees = 50;
  std::vector<double> means;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = datagen::generate_trial(datagen::default_schema(1), spec, datagen::region_spec_for(1.0), 300, s);
    const auto pv = nuisance::fit_pseudo_outcomes(d, nuisance::make_plan(d.treatment, 5, s), lp);
    means.push_back(stats::mean(pv.phi));
  }
  CHECK(std::fabs(stats::mean(means)) < 0.1);
}

TEST_CASE("workflow report is complete and reproducible") {
  const auto d = example();
  const auto a = workflow::run_workflow(d, quick());
  const auto b = workflow::run_workflow(d, quick());
  CHECK(a.n == 500);
  CHECK(a.region_n[0] + a.region_n[1] == 500);
  CHECK(a.p_rv.p_value == b.p_rv.p_value);
  CHECK(a.q3_ranking.scores == b.q3_ranking.scores);
  CHECK(a.pseudo.phi == b.pseudo.phi);
  CHECK(a.q2_ranking.names.size() == 30);
  CHECK(a.q3_ranking.names.size() == 31);
  CHECK(a.q3_ranking.rank_of("Region") > 0);
  CHECK(a.region_estimates.size() == 2);
  CHECK(!a.q4_displays.empty());
  for (double p : {a.p_rv.p_value, a.p_ri.p_value, a.p_teh.p_value}) CHECK((p > 0.0 && p <= 1.0));
}

TEST_CASE("masking X11 keeps the pseudo-outcome convention and hides the column") {
  const auto d = example();
  const auto u = workflow::run_workflow(datagen::mask_covariates(d, {"X11"}), quick());
  CHECK(u.q2_ranking.rank_of("X11") == 0);
  CHECK(u.q3_ranking.rank_of("X11") == 0);
  CHECK(u.analysis_mask == std::vector<std::string>{"X11"});
}

TEST_CASE("equal pseudo-outcomes give equal p_RV") {
  const auto d = example();
  auto c = quick();
  c.learner.include_region = true;
  const auto a = workflow::run_workflow(d, c);
  // The Q1 test only sees (phi, Region); rerunning it on the stored phi reproduces p_RV.
  Column phi{"phi", ColumnKind::continuous, {}, a.pseudo.phi};
  FeatureTable reg;
  reg.add(d.region_column());
  const auto again = indep::global_independence_test(phi, reg, c.n_perm, rhet::derive_seed(c.seed, {20}));
  CHECK(again.p_value == a.p_rv.p_value);
}

TEST_CASE("Q4 display for a continuous covariate") {
  const auto d = example();
  const auto a = workflow::run_workflow(d, quick());
  const auto it = std::find_if(a.q4_displays.begin(), a.q4_displays.end(),
                               [](const auto& q) { return q.kind == ColumnKind::continuous; });
  REQUIRE(it != a.q4_displays.end());
  CHECK(it->curve.points.size() == 100);
  CHECK(it->region_markers.size() == 2);
  CHECK(it->region_counts.size() == 2);
  std::size_t total = 0;
  for (const auto& r : it->region_counts)
    for (auto c : r) total += c;
  CHECK(total == 500);
}
