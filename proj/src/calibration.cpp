#include <algorithm>
#include <cmath>

#include "rhet/datagen.hpp"
#include "rhet/error.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::datagen {

InterceptCalibration calibrate_region_intercept(double alpha1, double prevalence_target,
                                                const std::vector<double>& x_pred_sample) {
  if (!(prevalence_target > 0.0 && prevalence_target < 1.0))
    throw ConfigError("prevalence target must be in (0, 1)");
  if (x_pred_sample.empty()) throw ConfigError("calibration sample is empty");

  auto mean_prob = [&](double a0) {
    double s = 0.0;
    for (double x : x_pred_sample) s += stats::expit(a0 + alpha1 * x);
    return s / static_cast<double>(x_pred_sample.size());
  };
  const auto [lo_x, hi_x] = std::minmax_element(x_pred_sample.begin(), x_pred_sample.end());
  // The mean lies between expit(a0 + alpha1 * min x) and expit(a0 + alpha1 * max x),
  // which brackets the root.
  const double base = stats::logit(prevalence_target);
  double lo = base - std::fabs(alpha1) * std::max(std::fabs(*lo_x), std::fabs(*hi_x)) - 1.0;
  double hi = base + std::fabs(alpha1) * std::max(std::fabs(*lo_x), std::fabs(*hi_x)) + 1.0;

  int it = 0;
  double mid = 0.5 * (lo + hi);
  for (; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double diff = mean_prob(mid) - prevalence_target;
    if (std::fabs(diff) <= 1e-6 && it > 0) break;
    if (diff < 0)
      lo = mid;
    else
      hi = mid;
  }
  return {mid, it + 1};
}

RegionSpec region_spec_for(double odds_ratio, double prevalence_target) {
  RegionSpec spec;
  spec.odds_ratio = odds_ratio;
  spec.prevalence_target = prevalence_target;
  spec.validate();
  spec.alpha1 = std::log(odds_ratio);
  constexpr int grid = 10000;
  std::vector<double> x(grid);
  for (int i = 0; i < grid; ++i) x[static_cast<std::size_t>(i)] = (i + 0.5) / grid;
  spec.alpha0 = calibrate_region_intercept(spec.alpha1, prevalence_target, x).alpha0;
  return spec;
}

double calibrate_scale_s(const ScenarioSpec& spec, double r2_target, const CovariateSchema& schema,
                         std::size_t n_cal, std::uint64_t seed) {
  if (!(r2_target > 0.0 && r2_target < 1.0)) throw ConfigError("R^2 target must be in (0, 1)");
  if (n_cal < 2) throw ConfigError("calibration sample needs at least 2 rows");
  const FeatureTable x = generate_covariates(schema, n_cal, seed);
  const OutcomeTerms t = outcome_terms(x, spec);
  const double v = stats::variance(t.prognostic);
  if (!(v > 1e-12)) throw CalibrationError("prognostic function has no variance on the calibration sample");
  constexpr double noise_var = 1.0;
  return std::sqrt(noise_var * r2_target / (v * (1.0 - r2_target)));
}

namespace {

// Per-replicate pieces of the interaction t statistic. With the model
// correctly specified the residuals do not depend on beta1, so
// t(beta1) = (beta1 + shift) / se for fixed simulated noise.
struct ReplicateStat {
  double shift;
  double se;
};

ReplicateStat interaction_pieces(const OutcomeTerms& t, const std::vector<int>& z,
                                 const std::vector<double>& noise) {
  const auto n = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    design(i, 0) = 1.0;
    design(i, 1) = t.prognostic[k];
    design(i, 2) = z[k];
    design(i, 3) = z[k] * t.predictive[k];
    e(i) = noise[k];
  }
  const Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  const Eigen::VectorXd coef = ldlt.solve(design.transpose() * e);
  const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(4, 4));
  const double rss = (e - design * coef).squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - 4);
  return {coef(3), std::sqrt(sigma2 * inv(3, 3))};
}

}  // namespace

PowerCalibration calibrate_beta1_star(const ScenarioSpec& spec, const CovariateSchema& schema,
                                      std::size_t n, double power_target, double alpha, int reps,
                                      std::uint64_t seed) {
  if (reps < 500) throw ConfigError("power calibration needs at least 500 replicates");
  if (!(power_target > 0.0 && power_target < 1.0)) throw ConfigError("power target must be in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (n < 8) throw ConfigError("power calibration needs n >= 8");

  std::vector<ReplicateStat> pieces(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(static)
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t rs = derive_seed(seed, {static_cast<std::uint64_t>(r)});
    const FeatureTable x = generate_covariates(schema, n, derive_seed(rs, {1}));
    const std::vector<int> z = generate_treatment(n, derive_seed(rs, {2}));
    Rng rng(derive_seed(rs, {3}));
    std::vector<double> noise(n);
    for (auto& v : noise) v = rng.normal();
    pieces[static_cast<std::size_t>(r)] = interaction_pieces(outcome_terms(x, spec), z, noise);
  }

  const double crit = stats::student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(n) - 4.0);
  auto power = [&](double beta1) {
    int rejected = 0;
    for (const auto& p : pieces)
      if (std::fabs((beta1 + p.shift) / p.se) > crit) ++rejected;
    return static_cast<double>(rejected) / reps;
  };

  double lo = 0.0, hi = 1.0;
  int widen = 0;
  while (power(hi) < power_target) {
    lo = hi;
    hi *= 2.0;
    if (++widen > 40) throw CalibrationError("power never reaches the target; widen the bracket");
  }
  int it = 0;
  for (; it < 100 && hi - lo > 1e-7 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (power(mid) >= power_target)
      hi = mid;
    else
      lo = mid;
  }
  return {hi, power(hi), it};
}

}  // namespace rhet::datagen
