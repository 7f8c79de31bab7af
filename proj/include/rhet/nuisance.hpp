#pragma once

// Cross-fitted nuisance models and the doubly-robust pseudo-outcome.

#include <cstdint>
#include <vector>

#include "rhet/datagen.hpp"
#include "rhet/forest.hpp"

namespace rhet::nuisance {

struct CrossFitPlan {
  int k_folds = 5;
  std::vector<int> fold;  // per patient, 0..k_folds-1
  std::uint64_t seed = 0;

  void validate(std::size_t n) const;
};

/// Folds stratified by treatment arm: each arm is shuffled and dealt
/// round-robin across the folds.
CrossFitPlan make_plan(const std::vector<int>& treatment, int k_folds, std::uint64_t seed);

enum class PropensityModel { known, logistic };

struct LearnerParams {
  forest::ForestParams forest;
  PropensityModel propensity = PropensityModel::known;
  double known_propensity = 0.5;
  double clip_lo = 0.01;
  double clip_hi = 0.99;
  /// Region enters the outcome (and propensity) models as a covariate.
  bool include_region = true;
};

struct PseudoOutcomeVector {
  std::vector<double> phi;
  std::vector<double> e_hat;
  std::vector<double> m0_hat;
  std::vector<double> m1_hat;
  CrossFitPlan plan;
  LearnerParams params;
};

/// (z - e) / (e (1 - e)) * (y - m_z) + m1 - m0
double dr_pseudo_outcome(int z, double y, double e, double m0, double m1);

/// T-learner regression forests per arm, trained on all folds but the
/// patient's own.
PseudoOutcomeVector fit_pseudo_outcomes(const datagen::TrialDataset& dataset, const CrossFitPlan& plan,
                                        const LearnerParams& params);

/// Training features for the nuisance models: analysis covariates and,
/// when requested, Region.
FeatureTable nuisance_features(const datagen::TrialDataset& dataset, bool include_region);

}  // namespace rhet::nuisance
