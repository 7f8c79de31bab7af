#pragma once

// The four-question workflow on one dataset: regional variability of the
// pseudo-outcome (Q1), regional imbalance of covariates (Q2), covariate-driven
// effect modification (Q3), and the overlap display (Q4), mapped to a roadmap
// terminal.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rhet/datagen.hpp"
#include "rhet/forest.hpp"
#include "rhet/indep.hpp"
#include "rhet/nuisance.hpp"
#include "rhet/smooth.hpp"

namespace rhet::workflow {

struct RegionEstimate {
  int region = 0;
  double estimate = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n = 0;
};

/// OLS of Y on {1, Z, Region, Z*Region}; the per-region effects are coef(Z)
/// and coef(Z) + coef(Z*Region), with 1.96 * se intervals.
std::vector<RegionEstimate> fit_interaction_model(std::span<const double> y, std::span<const int> z,
                                                  std::span<const int> region);
std::vector<RegionEstimate> fit_interaction_model(const datagen::TrialDataset& dataset);

enum class Terminal { T1, T2, T3, T4, T5 };

const char* to_string(Terminal t);
Terminal terminal_from_string(const std::string& s);

struct Thresholds {
  double no_evidence = 0.2;
  double strong = 0.05;
  /// A T2 leader needs this multiple of the next overlap member's VI in both rankings.
  double dominance = 2.0;
  /// An overlap leader must reach this fraction of each ranking's top VI;
  /// otherwise the overlap counts as diffuse noise.
  double support = 0.5;
  std::size_t small_region_n = 50;
  std::size_t top_k = 5;
};

struct Decision {
  Terminal terminal = Terminal::T1;
  std::string rationale;
};

/// Top-K of both rankings intersected, ordered by the sum of ranks, then the
/// Q3 rank, then the Q2 feature index.
std::vector<std::string> overlap_set(const forest::ImportanceRanking& q2, const forest::ImportanceRanking& q3,
                                     std::size_t k);

Decision decide_terminal(double p_rv, double p_ri, double p_teh, const std::vector<std::string>& overlap,
                         const forest::ImportanceRanking& q2, const forest::ImportanceRanking& q3,
                         std::size_t min_region_n, const Thresholds& thresholds);

struct RegionMarker {
  int region;
  double median_x;
  double estimate;
  double lower;
  double upper;
};

struct LevelSummary {
  std::string level;
  std::size_t n;
  double mean;
  double lower;
  double upper;
};

struct ArmCurve {
  int arm;
  std::vector<double> x;     // bin centres
  std::vector<double> mean;  // mean outcome per bin, NaN when empty
};

struct Q4Display {
  std::string covariate;
  ColumnKind kind = ColumnKind::continuous;
  smooth::SmoothCurve curve;          // continuous covariates
  std::vector<LevelSummary> levels;   // binary and categorical covariates
  double overall_ate = 0.0;
  std::vector<RegionMarker> region_markers;
  std::vector<double> bin_edges;
  std::vector<std::vector<std::size_t>> region_counts;  // [region][bin] or [region][level]
  std::vector<ArmCurve> arm_curves;
};

struct WorkflowConfig {
  int n_perm = indep::default_permutations;
  std::uint64_t seed = 1;
  int k_folds = 5;
  forest::ForestParams forest;
  nuisance::LearnerParams learner;
  forest::ClassLoss q2_loss = forest::ClassLoss::brier;
  Thresholds thresholds;
  bool build_displays = true;
  int grid_points = 100;
  int histogram_bins = 10;
};

struct WorkflowReport {
  std::vector<std::string> analysis_mask;
  std::vector<std::string> features;  // Q2 feature set, incl. in Q3 with Region
  std::size_t n = 0;
  std::size_t region_n[2] = {0, 0};
  nuisance::PseudoOutcomeVector pseudo;
  indep::GlobalTestResult p_rv, p_ri, p_teh;
  forest::ImportanceRanking q2_ranking, q3_ranking;
  std::vector<std::string> overlap;
  std::vector<Q4Display> q4_displays;
  std::vector<RegionEstimate> region_estimates;
  Decision decision;
  WorkflowConfig config;
};

Q4Display build_display(const datagen::TrialDataset& dataset, const std::vector<double>& phi,
                        const std::string& covariate, const std::vector<RegionEstimate>& estimates,
                        const WorkflowConfig& config);

/// Cross-fitted pseudo-outcomes exactly as run_workflow computes them.
nuisance::PseudoOutcomeVector pseudo_outcomes(const datagen::TrialDataset& dataset, const WorkflowConfig& config);

WorkflowReport run_workflow(const datagen::TrialDataset& dataset, const WorkflowConfig& config);

}  // namespace rhet::workflow
