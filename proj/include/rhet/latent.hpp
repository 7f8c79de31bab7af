#pragma once

#include <span>

#include <Eigen/Dense>

#include "rhet/table.hpp"

namespace rhet::latent {

struct KendallTau {
  double tau_a;
  double tau_b;
};

/// O(n log n) Kendall tau (Knight's algorithm).
KendallTau kendall_tau(std::span<const double> x, std::span<const double> y);

/// Latent Gaussian correlation of one pair, inverting the Kendall-tau bridge
/// for the pair's column kinds. NaN when either column is constant.
double latent_correlation(const Column& a, const Column& b);

/// All pairs; unit diagonal, NaN entries for pairs involving constant columns.
Eigen::MatrixXd latent_correlations(const FeatureTable& x);

}  // namespace rhet::latent
