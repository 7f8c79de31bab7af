#pragma once

// Permutation tests of independence between one response and a block of
// mixed-type covariates, combined by the maximum standardized linear statistic.

#include <cstdint>
#include <string>
#include <vector>

#include "rhet/table.hpp"

namespace rhet::indep {

struct GlobalTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int n_permutations = 0;
  std::uint64_t seed = 0;
  /// Permuted statistics at least as large as the observed one.
  int exceedances = 0;
  std::vector<std::string> covariate_names;
  std::vector<double> per_covariate_statistics;
  /// Set when the response is constant; the p-value is then 1.
  bool degenerate = false;
};

constexpr int default_permutations = 4999;

/// Continuous responses and covariates enter through mid-ranks, binary ones as
/// indicators, categorical ones through one indicator per level. Each linear
/// statistic is standardized by its exact permutation mean and variance.
/// p = (1 + #{permuted max >= observed max}) / (n_perm + 1).
GlobalTestResult global_independence_test(const Column& response, const FeatureTable& covariates,
                                          int n_perm, std::uint64_t seed);

}  // namespace rhet::indep
