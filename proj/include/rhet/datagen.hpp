#pragma once

// Synthetic multi-regional trial generator: Gaussian-copula covariates, the
// two benchmark outcome scenarios, logistic region assignment, and the
// design-time calibration of the scale, interaction and intercept constants.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rhet/table.hpp"

namespace rhet::datagen {

/// Conceptual covariate class: region-imbalanced only (x1), region-associated
/// effect modifier (x2), effect modifier balanced across regions (x3).
enum class Role { x1_class, x2_class, x3_class, noise };

const char* to_string(Role role);
Role role_from_string(const std::string& s);

struct CovariateSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> levels;
  std::vector<double> level_probs;
  Role role = Role::noise;
};

struct CovariateSchema {
  std::vector<CovariateSpec> columns;
  Eigen::MatrixXd latent_correlation;

  std::size_t size() const { return columns.size(); }
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names_with_role(Role role) const;

  /// Throws SchemaError on shape, symmetry, diagonal, range or PSD violations.
  void validate() const;
};

/// The shipped 30-covariate schema. Roles depend on the scenario (1 or 2);
/// scenario 0 returns the same distribution with every role set to noise.
CovariateSchema default_schema(int scenario = 0);

/// Prognostic term of scenario 1. `table` is s*{0.5*I(X1=Y) + X11}; the
/// worked example uses s*{0.5*(I(X1=Y) + X11)}.
enum class PrognosticForm { table, worked_example };

struct ScenarioSpec {
  int id = 1;
  PrognosticForm prognostic_form = PrognosticForm::table;
  std::string x_pred_name;
  double s = 1.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta1_star = 1.0;
  double r2_target = 0.3;

  std::string prognostic_description() const;
  std::string predictive_description() const;
  void validate() const;
};

/// Defaults for scenario 1 (X11, beta0 = -0.106) or 2 (X14, beta0 = 0).
/// s and beta1_star are left for the calibration routines.
ScenarioSpec scenario_spec(int id);

/// Spec of the worked single-dataset example: scenario 1 with s = 2.32,
/// beta0 = -0.106, beta1 = 0.767 and the worked-example prognostic form.
ScenarioSpec worked_example_spec();

/// Dataset seed of the repo-fixed running example (worked spec, n = 500, OR = 10).
inline constexpr std::uint64_t running_example_seed = 28;

/// Unscaled prognostic f_prog(x) and predictive f_pred(x) per row.
struct OutcomeTerms {
  std::vector<double> prognostic;
  std::vector<double> predictive;
};
OutcomeTerms outcome_terms(const FeatureTable& x, const ScenarioSpec& spec);

struct RegionSpec {
  double prevalence_target = 0.2;
  double odds_ratio = 1.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;

  void validate() const;
};

struct TrialDataset {
  FeatureTable covariates;
  std::vector<int> treatment;
  std::vector<double> outcome;
  std::vector<int> region;
  CovariateSchema schema;
  /// Covariates hidden from every analysis step; storage is unchanged.
  std::vector<std::string> analysis_mask;

  std::size_t size() const { return treatment.size(); }
  bool is_masked(const std::string& name) const;
  /// Covariates visible to analyses, in natural name order (X2 before X10).
  FeatureTable analysis_covariates() const;
  Column region_column() const;
  void validate() const;
};

FeatureTable generate_covariates(const CovariateSchema& schema, std::size_t n, std::uint64_t seed);

/// Randomised 1:1 assignment, independent of covariates.
std::vector<int> generate_treatment(std::size_t n, std::uint64_t seed);

/// Y = s f_prog + Z (beta0 + beta1 f_pred) + noise_sd * N(0, 1).
std::vector<double> generate_outcome(const FeatureTable& x, const std::vector<int>& treatment,
                                     const ScenarioSpec& spec, std::uint64_t seed,
                                     double noise_sd = 1.0);

std::vector<int> generate_region(const std::vector<double>& x_pred, const RegionSpec& spec,
                                 std::uint64_t seed);

struct InterceptCalibration {
  double alpha0;
  int iterations;
};

/// Bisection for alpha0 with |mean expit(alpha0 + alpha1 x) - target| <= 1e-6.
InterceptCalibration calibrate_region_intercept(double alpha1, double prevalence_target,
                                                const std::vector<double>& x_pred_sample);

/// RegionSpec with alpha1 = ln(OR) and alpha0 calibrated for a Uniform(0, 1)
/// predictor (evaluated on a midpoint grid).
RegionSpec region_spec_for(double odds_ratio, double prevalence_target = 0.2);

/// Closed-form s with s^2 = r2 / ((1 - r2) Var(f_prog)), unit noise variance;
/// Var(f_prog) estimated on n_cal generated rows.
double calibrate_scale_s(const ScenarioSpec& spec, double r2_target, const CovariateSchema& schema,
                         std::size_t n_cal, std::uint64_t seed);

struct PowerCalibration {
  double beta1_star;
  double achieved_power;
  int iterations;
};

/// Smallest beta1 whose Monte-Carlo power for the interaction coefficient in
/// Y ~ f_prog + Z + Z f_pred reaches power_target. Replicates are held fixed
/// across the bisection (common random numbers).
PowerCalibration calibrate_beta1_star(const ScenarioSpec& spec, const CovariateSchema& schema,
                                      std::size_t n, double power_target, double alpha, int reps,
                                      std::uint64_t seed);

/// Full dataset: covariates, 1:1 treatment, outcome and region.
TrialDataset generate_trial(const CovariateSchema& schema, const ScenarioSpec& scenario,
                            const RegionSpec& region, std::size_t n, std::uint64_t seed);

/// Returns a copy with the named covariates added to the analysis mask.
TrialDataset mask_covariates(TrialDataset dataset, const std::vector<std::string>& names);

}  // namespace rhet::datagen
