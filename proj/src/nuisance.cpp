#include "rhet/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "rhet/error.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::nuisance {

void CrossFitPlan::validate(std::size_t n) const {
  if (k_folds < 2) throw ConfigError("cross-fitting needs at least 2 folds");
  if (fold.size() != n) throw DataError("fold assignment length differs from the dataset");
  std::vector<int> seen(static_cast<std::size_t>(k_folds), 0);
  for (int f : fold) {
    if (f < 0 || f >= k_folds) throw DataError("fold id out of range");
    seen[static_cast<std::size_t>(f)] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw DataError("empty cross-fitting fold");
}

CrossFitPlan make_plan(const std::vector<int>& treatment, int k_folds, std::uint64_t seed) {
  if (k_folds < 2) throw ConfigError("cross-fitting needs at least 2 folds");
  CrossFitPlan plan;
  plan.k_folds = k_folds;
  plan.seed = seed;
  plan.fold.assign(treatment.size(), 0);
  int offset = 0;
  for (int arm = 0; arm <= 1; ++arm) {
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < treatment.size(); ++i)
      if (treatment[i] == arm) rows.push_back(static_cast<std::uint32_t>(i));
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(arm)}));
    rng.shuffle(std::span<std::uint32_t>(rows));
    // The second arm continues the deal where the first stopped, which keeps
    // fold sizes within one of each other.
    for (std::size_t r = 0; r < rows.size(); ++r)
      plan.fold[rows[r]] = static_cast<int>((r + static_cast<std::size_t>(offset)) % static_cast<std::size_t>(k_folds));
    offset = static_cast<int>((rows.size() + static_cast<std::size_t>(offset)) % static_cast<std::size_t>(k_folds));
  }
  return plan;
}

double dr_pseudo_outcome(int z, double y, double e, double m0, double m1) {
  const double mz = z == 1 ? m1 : m0;
  return (z - e) / (e * (1.0 - e)) * (y - mz) + m1 - m0;
}

FeatureTable nuisance_features(const datagen::TrialDataset& dataset, bool include_region) {
  FeatureTable x = dataset.analysis_covariates();
  if (include_region) x.add(dataset.region_column());
  return x;
}

namespace {

// Intercept plus numeric columns plus one indicator per non-reference level.
Eigen::MatrixXd logistic_design(const FeatureTable& x, const std::vector<std::size_t>& rows) {
  std::size_t width = 1;
  for (const auto& c : x.columns()) width += c.kind == ColumnKind::categorical ? c.n_levels() - 1 : 1;
  Eigen::MatrixXd d(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    Eigen::Index k = 0;
    d(ri, k++) = 1.0;
    for (const auto& c : x.columns()) {
      const double v = c.values[rows[r]];
      if (c.kind == ColumnKind::categorical)
        for (int l = 1; l < c.n_levels(); ++l) d(ri, k++) = v == l ? 1.0 : 0.0;
      else
        d(ri, k++) = v;
    }
  }
  return d;
}

// Ridge-stabilised IRLS for a logistic regression.
Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& d, const Eigen::VectorXd& z) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.cols());
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd eta = d * beta;
    Eigen::VectorXd p(eta.size()), w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      p(i) = stats::expit(eta(i));
      w(i) = std::max(p(i) * (1.0 - p(i)), 1e-10);
    }
    Eigen::MatrixXd h = d.transpose() * w.asDiagonal() * d;
    h.diagonal().array() += 1e-6;
    const Eigen::VectorXd step = h.ldlt().solve(d.transpose() * (z - p) - 1e-6 * beta);
    beta += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-10) break;
  }
  return beta;
}

}  // namespace

PseudoOutcomeVector fit_pseudo_outcomes(const datagen::TrialDataset& dataset, const CrossFitPlan& plan,
                                        const LearnerParams& params) {
  const std::size_t n = dataset.size();
  dataset.validate();
  plan.validate(n);
  if (!(params.clip_lo > 0.0 && params.clip_lo < params.clip_hi && params.clip_hi < 1.0))
    throw ConfigError("propensity clipping bounds must satisfy 0 < lo < hi < 1");
  if (params.propensity == PropensityModel::known &&
      !(params.known_propensity > 0.0 && params.known_propensity < 1.0))
    throw ConfigError("known propensity must be in (0, 1)");

  const FeatureTable x = nuisance_features(dataset, params.include_region);
  if (x.cols() == 0) throw DataError("no analysis covariates available for the outcome models");

  PseudoOutcomeVector out;
  out.plan = plan;
  out.params = params;
  out.phi.assign(n, 0.0);
  out.e_hat.assign(n, params.known_propensity);
  out.m0_hat.assign(n, 0.0);
  out.m1_hat.assign(n, 0.0);

  const int K = plan.k_folds;
  for (int f = 0; f < K; ++f) {
    std::vector<std::size_t> test_rows, train_rows;
    std::size_t arm_count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      if (plan.fold[i] == f) {
        test_rows.push_back(i);
      } else {
        train_rows.push_back(i);
        ++arm_count[dataset.treatment[i]];
      }
    }
    if (arm_count[0] < 2 || arm_count[1] < 2)
      throw DataError("training split without fold " + std::to_string(f) +
                      " has fewer than 2 patients in an arm; use fewer folds");
    const FeatureTable x_test = x.subset_rows(test_rows);

    for (int arm = 0; arm <= 1; ++arm) {
      std::vector<std::size_t> rows;
      for (std::size_t i : train_rows)
        if (dataset.treatment[i] == arm) rows.push_back(i);
      std::vector<double> y;
      for (std::size_t i : rows) y.push_back(dataset.outcome[i]);
      forest::ForestParams fp = params.forest;
      fp.seed = derive_seed(params.forest.seed, {static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(arm)});
      // Small training arms cannot honour the node size; shrink it.
      fp.min_node_size = std::min<int>(fp.min_node_size, static_cast<int>(rows.size()));
      const forest::Forest model = forest::fit(x.subset_rows(rows), y, forest::Task::regression, fp);
      const std::vector<double> pred = model.predict(x_test);
      auto& dst = arm == 1 ? out.m1_hat : out.m0_hat;
      for (std::size_t r = 0; r < test_rows.size(); ++r) dst[test_rows[r]] = pred[r];
    }

    if (params.propensity == PropensityModel::logistic) {
      const Eigen::MatrixXd d_train = logistic_design(x, train_rows);
      Eigen::VectorXd z(static_cast<Eigen::Index>(train_rows.size()));
      for (std::size_t r = 0; r < train_rows.size(); ++r)
        z(static_cast<Eigen::Index>(r)) = dataset.treatment[train_rows[r]];
      const Eigen::VectorXd beta = fit_logistic(d_train, z);
      const Eigen::VectorXd eta = logistic_design(x, test_rows) * beta;
      for (std::size_t r = 0; r < test_rows.size(); ++r)
        out.e_hat[test_rows[r]] = stats::expit(eta(static_cast<Eigen::Index>(r)));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::clamp(out.e_hat[i], params.clip_lo, params.clip_hi);
    out.e_hat[i] = e;
    out.phi[i] = dr_pseudo_outcome(dataset.treatment[i], dataset.outcome[i], e, out.m0_hat[i], out.m1_hat[i]);
    if (!std::isfinite(out.phi[i])) throw DataError("non-finite pseudo-outcome at row " + std::to_string(i));
  }
  return out;
}

}  // namespace rhet::nuisance
