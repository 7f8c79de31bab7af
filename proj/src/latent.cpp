#include "rhet/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rhet/error.hpp"
#include "rhet/stats.hpp"

namespace rhet::latent {

namespace {

// Merge sort counting exchanges.
std::uint64_t sort_count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = sort_count_swaps(v, buf, lo, mid) + sort_count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// Sum over tie groups of t(t-1)/2 in sorted data, with an equality predicate.
template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq eq) {
  std::uint64_t total = 0, run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (eq(i - 1, i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total + run * (run - 1) / 2;
}

}  // namespace

KendallTau kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw DataError("kendall_tau inputs differ in length");
  if (n < 2) return {std::nan(""), std::nan("")};
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> ys(n), xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  const std::uint64_t n1 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b]; });
  const std::uint64_t n3 =
      tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b] && ys[a] == ys[b]; });
  std::vector<double> buf(n);
  const std::uint64_t swaps = sort_count_swaps(ys, buf, 0, n);
  const std::uint64_t n2 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double s = n0 - static_cast<double>(n1) - static_cast<double>(n2) + static_cast<double>(n3) -
                   2.0 * static_cast<double>(swaps);
  const double denom_b = std::sqrt((n0 - static_cast<double>(n1)) * (n0 - static_cast<double>(n2)));
  return {s / n0, denom_b > 0 ? s / denom_b : std::nan("")};
}

namespace {

// Bisection for r in [-1, 1] with bridge(r) = tau, bridge increasing.
template <class Bridge>
double invert(Bridge bridge, double tau) {
  double lo = -0.9999, hi = 0.9999;
  if (tau <= bridge(lo)) return lo;
  if (tau >= bridge(hi)) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bridge(mid) < tau)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double threshold(const Column& c) {
  double ones = 0.0;
  for (double v : c.values) ones += v == 1.0 ? 1.0 : 0.0;
  return stats::normal_quantile(1.0 - ones / static_cast<double>(c.values.size()));
}

}  // namespace

double latent_correlation(const Column& a, const Column& b) {
  if (a.is_constant() || b.is_constant()) return std::nan("");
  const KendallTau t = kendall_tau(a.values, b.values);
  const bool ba = a.kind == ColumnKind::binary, bb = b.kind == ColumnKind::binary;
  if (ba && bb) {
    const double da = threshold(a), db = threshold(b);
    const double base = stats::normal_cdf(da) * stats::normal_cdf(db);
    return invert([&](double r) { return 2.0 * (stats::bivariate_normal_cdf(da, db, r) - base); }, t.tau_a);
  }
  if (ba || bb) {
    const Column& bin = ba ? a : b;
    const Column& other = ba ? b : a;
    if (other.kind == ColumnKind::continuous) {
      const double d = threshold(bin);
      return invert(
          [&](double r) {
            return 4.0 * stats::bivariate_normal_cdf(d, 0.0, r / std::numbers::sqrt2) - 2.0 * stats::normal_cdf(d);
          },
          t.tau_a);
    }
  }
  // Continuous pairs use tau_a; pairs with a multi-level factor fall back to
  // the continuous bridge on the tie-corrected tau_b.
  const bool cont = a.kind == ColumnKind::continuous && b.kind == ColumnKind::continuous;
  return std::sin(std::numbers::pi / 2.0 * (cont ? t.tau_a : t.tau_b));
}

Eigen::MatrixXd latent_correlations(const FeatureTable& x) {
  const auto p = static_cast<Eigen::Index>(x.cols());
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (x.col(static_cast<std::size_t>(i)).is_constant()) r(i, i) = std::nan("");
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = latent_correlation(x.col(static_cast<std::size_t>(i)), x.col(static_cast<std::size_t>(j)));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace rhet::latent
