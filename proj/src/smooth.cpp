#include "rhet/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "rhet/error.hpp"

namespace rhet::smooth {

namespace {
constexpr int n_segments = 20;
}

std::vector<double> bspline_basis(double x, double lo, double hi, int nseg) {
  const int deg = 3;
  const double h = (hi - lo) / nseg;
  std::vector<double> out(static_cast<std::size_t>(nseg + deg), 0.0);
  // Knots lo + (k - deg) h for k = 0..nseg + 2 deg.
  double t = (x - lo) / h;
  int seg = static_cast<int>(std::floor(t));
  seg = std::clamp(seg, 0, nseg - 1);
  const double u = t - seg;  // position inside the segment, [0, 1]
  // Uniform cubic B-spline pieces.
  const double b0 = (1 - u) * (1 - u) * (1 - u) / 6.0;
  const double b1 = (3 * u * u * u - 6 * u * u + 4) / 6.0;
  const double b2 = (-3 * u * u * u + 3 * u * u + 3 * u + 1) / 6.0;
  const double b3 = u * u * u / 6.0;
  out[static_cast<std::size_t>(seg)] = b0;
  out[static_cast<std::size_t>(seg + 1)] = b1;
  out[static_cast<std::size_t>(seg + 2)] = b2;
  out[static_cast<std::size_t>(seg + 3)] = b3;
  return out;
}

SmoothCurve smooth_phi(std::span<const double> y, std::span<const double> x, int grid_points) {
  const std::size_t n = y.size();
  if (x.size() != n) throw DataError("smoother inputs differ in length");
  if (n < 22) throw DataError("smoother needs at least 22 points, got " + std::to_string(n));
  if (grid_points < 2) throw ConfigError("smoother grid needs at least 2 points");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("non-finite smoother input");

  std::vector<double> sx(x.begin(), x.end());
  std::sort(sx.begin(), sx.end());
  const double g_lo = sx[10], g_hi = sx[n - 11];
  if (!(g_hi > g_lo)) throw DataError("covariate has no spread between the trimmed order statistics");
  const double lo = sx.front(), hi = sx.back();

  const int m = n_segments + 3;
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ni, m);
  Eigen::VectorXd yv(ni);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = bspline_basis(x[i], lo, hi, n_segments);
    for (int k = 0; k < m; ++k) B(static_cast<Eigen::Index>(i), k) = b[static_cast<std::size_t>(k)];
    yv(static_cast<Eigen::Index>(i)) = y[i];
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m - 2, m);
  for (int k = 0; k < m - 2; ++k) {
    D(k, k) = 1.0;
    D(k, k + 1) = -2.0;
    D(k, k + 2) = 1.0;
  }
  const Eigen::MatrixXd BtB = B.transpose() * B;
  const Eigen::MatrixXd P = D.transpose() * D;
  const Eigen::VectorXd Bty = B.transpose() * yv;
  const double scale = BtB.trace() / P.trace();

  double best_gcv = std::numeric_limits<double>::infinity(), best_lambda = 0.0;
  for (double e = -6.0; e <= 6.0 + 1e-9; e += 0.25) {
    const double lambda = scale * std::pow(10.0, e);
    const Eigen::MatrixXd A = BtB + lambda * P;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    const Eigen::VectorXd beta = ldlt.solve(Bty);
    const double rss = (yv - B * beta).squaredNorm();
    const double tr = ldlt.solve(BtB).trace();
    const double denom = static_cast<double>(n) - tr;
    if (denom <= 0) continue;
    const double gcv = static_cast<double>(n) * rss / (denom * denom);
    if (gcv < best_gcv - 1e-12 * std::fabs(best_gcv)) {
      best_gcv = gcv;
      best_lambda = lambda;
    }
  }

  SmoothCurve curve;
  curve.lambda = best_lambda;
  const Eigen::MatrixXd A = BtB + best_lambda * P;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  const Eigen::VectorXd beta = ldlt.solve(Bty);
  curve.edf = ldlt.solve(BtB).trace();
  const Eigen::VectorXd resid = yv - B * beta;
  // Sandwich: A^-1 B' diag(e^2) B A^-1.
  const Eigen::MatrixXd meat = B.transpose() * resid.array().square().matrix().asDiagonal() * B;
  const Eigen::MatrixXd ainv = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd cov = ainv * meat * ainv;

  for (int g = 0; g < grid_points; ++g) {
    const double xv = g_lo + (g_hi - g_lo) * g / (grid_points - 1);
    const auto b = bspline_basis(xv, lo, hi, n_segments);
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), m);
    const double fit = bv.dot(beta);
    const double se = std::sqrt(std::max(0.0, bv.dot(cov * bv)));
    curve.points.push_back({xv, fit, fit - 1.96 * se, fit + 1.96 * se});
  }
  return curve;
}

}  // namespace rhet::smooth
