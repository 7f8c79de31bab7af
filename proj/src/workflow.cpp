#include "rhet/workflow.hpp"

#include <algorithm>
#include <cmath>

#include "rhet/error.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::workflow {

namespace {

// Seed tags of the workflow's random components.
enum Stream : std::uint64_t {
  folds = 10,
  outcome_models = 11,
  test_rv = 20,
  test_ri = 21,
  test_teh = 22,
  q2_forest = 30,
  q2_importance = 31,
  q3_forest = 32,
  q3_importance = 33,
};

double nan() { return std::nan(""); }

}  // namespace

Q4Display build_display(const datagen::TrialDataset& dataset, const std::vector<double>& phi,
                        const std::string& covariate, const std::vector<RegionEstimate>& estimates,
                        const WorkflowConfig& config) {
  if (dataset.is_masked(covariate)) throw DataError("covariate '" + covariate + "' is masked from the analysis");
  const Column& col = dataset.covariates.col(dataset.covariates.index_of(covariate));
  const std::size_t n = dataset.size();
  if (phi.size() != n) throw DataError("pseudo-outcome length differs from the dataset");

  Q4Display d;
  d.covariate = covariate;
  d.kind = col.kind;
  d.overall_ate = stats::mean(phi);

  for (int r = 0; r < 2; ++r) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i)
      if (dataset.region[i] == r) xs.push_back(col.values[i]);
    const RegionEstimate* est = nullptr;
    for (const auto& e : estimates)
      if (e.region == r) est = &e;
    d.region_markers.push_back({r, xs.empty() ? nan() : stats::median(xs), est ? est->estimate : nan(),
                                est ? est->lower : nan(), est ? est->upper : nan()});
  }

  if (col.kind == ColumnKind::continuous) {
    d.curve = smooth::smooth_phi(phi, col.values, config.grid_points);
    const auto [mn, mx] = std::minmax_element(col.values.begin(), col.values.end());
    const int bins = std::max(1, config.histogram_bins);
    const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1.0;
    for (int b = 0; b <= bins; ++b) d.bin_edges.push_back(lo + (hi - lo) * b / bins);
    auto bin_of = [&](double v) {
      return std::clamp(static_cast<int>((v - lo) / (hi - lo) * bins), 0, bins - 1);
    };
    d.region_counts.assign(2, std::vector<std::size_t>(static_cast<std::size_t>(bins), 0));
    std::vector<std::vector<double>> ysum(2, std::vector<double>(static_cast<std::size_t>(bins), 0.0));
    std::vector<std::vector<double>> ycnt = ysum;
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = static_cast<std::size_t>(bin_of(col.values[i]));
      ++d.region_counts[static_cast<std::size_t>(dataset.region[i])][b];
      ysum[static_cast<std::size_t>(dataset.treatment[i])][b] += dataset.outcome[i];
      ycnt[static_cast<std::size_t>(dataset.treatment[i])][b] += 1.0;
    }
    for (int a = 0; a < 2; ++a) {
      ArmCurve c{a, {}, {}};
      for (int b = 0; b < bins; ++b) {
        const auto bi = static_cast<std::size_t>(b);
        c.x.push_back(0.5 * (d.bin_edges[bi] + d.bin_edges[bi + 1]));
        const double cnt = ycnt[static_cast<std::size_t>(a)][bi];
        c.mean.push_back(cnt > 0 ? ysum[static_cast<std::size_t>(a)][bi] / cnt : nan());
      }
      d.arm_curves.push_back(std::move(c));
    }
  } else {
    const auto L = static_cast<std::size_t>(col.n_levels());
    d.region_counts.assign(2, std::vector<std::size_t>(L, 0));
    std::vector<std::vector<double>> per_level(L);
    std::vector<std::vector<double>> ysum(2, std::vector<double>(L, 0.0)), ycnt = ysum;
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(col.values[i]);
      per_level[l].push_back(phi[i]);
      ++d.region_counts[static_cast<std::size_t>(dataset.region[i])][l];
      ysum[static_cast<std::size_t>(dataset.treatment[i])][l] += dataset.outcome[i];
      ycnt[static_cast<std::size_t>(dataset.treatment[i])][l] += 1.0;
    }
    for (std::size_t l = 0; l < L; ++l) {
      const auto& v = per_level[l];
      const double m = v.empty() ? nan() : stats::mean(v);
      const double se = v.size() > 1 ? std::sqrt(stats::variance(v) / static_cast<double>(v.size())) : nan();
      d.levels.push_back({col.levels[l], v.size(), m, m - 1.96 * se, m + 1.96 * se});
    }
    for (int a = 0; a < 2; ++a) {
      ArmCurve c{a, {}, {}};
      for (std::size_t l = 0; l < L; ++l) {
        c.x.push_back(static_cast<double>(l));
        const double cnt = ycnt[static_cast<std::size_t>(a)][l];
        c.mean.push_back(cnt > 0 ? ysum[static_cast<std::size_t>(a)][l] / cnt : nan());
      }
      d.arm_curves.push_back(std::move(c));
    }
  }
  return d;
}

nuisance::PseudoOutcomeVector pseudo_outcomes(const datagen::TrialDataset& dataset, const WorkflowConfig& config) {
  const auto plan = nuisance::make_plan(dataset.treatment, config.k_folds, derive_seed(config.seed, {folds}));
  nuisance::LearnerParams learner = config.learner;
  learner.forest.seed = derive_seed(config.seed, {outcome_models});
  return nuisance::fit_pseudo_outcomes(dataset, plan, learner);
}

WorkflowReport run_workflow(const datagen::TrialDataset& dataset, const WorkflowConfig& config) {
  dataset.validate();
  const FeatureTable x = dataset.analysis_covariates();
  if (x.cols() == 0) throw DataError("no analysis covariates: every covariate is masked");
  const std::size_t n = dataset.size();

  WorkflowReport rep;
  rep.config = config;
  rep.analysis_mask = dataset.analysis_mask;
  rep.features = x.names();
  rep.n = n;
  for (int r : dataset.region) ++rep.region_n[r];

  rep.pseudo = pseudo_outcomes(dataset, config);
  const std::vector<double>& phi = rep.pseudo.phi;

  const Column phi_col{"phi", ColumnKind::continuous, {}, phi};
  const Column region_col = dataset.region_column();
  const FeatureTable region_table(std::vector<Column>{region_col});

  // Q1: phi vs Region. Q2: Region vs X. Q3: phi vs X.
  rep.p_rv = indep::global_independence_test(phi_col, region_table, config.n_perm, derive_seed(config.seed, {test_rv}));
  rep.p_ri = indep::global_independence_test(region_col, x, config.n_perm, derive_seed(config.seed, {test_ri}));
  rep.p_teh = indep::global_independence_test(phi_col, x, config.n_perm, derive_seed(config.seed, {test_teh}));

  forest::ForestParams fp = config.forest;
  fp.seed = derive_seed(config.seed, {q2_forest});
  const std::vector<double> region_y(dataset.region.begin(), dataset.region.end());
  const forest::Forest f2 = forest::fit(x, region_y, forest::Task::classification, fp);
  rep.q2_ranking = forest::variable_importance(f2, x, region_y, derive_seed(config.seed, {q2_importance}),
                                               config.q2_loss);

  FeatureTable x3 = x;
  x3.add(region_col);
  fp.seed = derive_seed(config.seed, {q3_forest});
  const forest::Forest f3 = forest::fit(x3, phi, forest::Task::regression, fp);
  rep.q3_ranking = forest::variable_importance(f3, x3, phi, derive_seed(config.seed, {q3_importance}));

  rep.overlap = overlap_set(rep.q2_ranking, rep.q3_ranking, config.thresholds.top_k);
  rep.region_estimates = fit_interaction_model(dataset);
  rep.decision = decide_terminal(rep.p_rv.p_value, rep.p_ri.p_value, rep.p_teh.p_value, rep.overlap,
                                 rep.q2_ranking, rep.q3_ranking, std::min(rep.region_n[0], rep.region_n[1]),
                                 config.thresholds);
  if (config.build_displays)
    for (const auto& name : rep.overlap)
      rep.q4_displays.push_back(build_display(dataset, phi, name, rep.region_estimates, config));
  return rep;
}

}  // namespace rhet::workflow
