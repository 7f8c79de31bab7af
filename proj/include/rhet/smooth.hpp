#pragma once

#include <span>
#include <vector>

namespace rhet::smooth {

struct CurvePoint {
  double x;
  double fit;
  double lower;
  double upper;
};

struct SmoothCurve {
  std::vector<CurvePoint> points;
  double lambda = 0.0;
  /// Trace of the hat matrix.
  double edf = 0.0;
};

/// Cubic P-spline (B-spline basis, second-order difference penalty) of y on x
/// with the penalty chosen by generalized cross-validation. The pointwise 95%
/// band uses the heteroscedasticity-robust sandwich variance. The curve is
/// evaluated on `grid_points` equally spaced values between the 11th and the
/// (n-10)th order statistics of x.
SmoothCurve smooth_phi(std::span<const double> y, std::span<const double> x, int grid_points = 100);

/// Cubic B-spline basis on nseg equal segments of [lo, hi]; nseg + 3 values.
std::vector<double> bspline_basis(double x, double lo, double hi, int nseg);

}  // namespace rhet::smooth
