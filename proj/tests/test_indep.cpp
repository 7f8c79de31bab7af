#include <omp.h>

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rhet/error.hpp"
#include "rhet/indep.hpp"
#include "rhet/rng.hpp"

using namespace rhet;

namespace {

Column num(std::vector<double> v, const std::string& name = "y") {
  return Column{name, ColumnKind::continuous, {}, std::move(v)};
}

Column bin(std::vector<double> v, const std::string& name = "g") {
  return Column{name, ColumnKind::binary, {"0", "1"}, std::move(v)};
}

// Exact two-sided permutation p-value of the rank-sum statistic by
// enumerating every group assignment.
double exact_p(const std::vector<double>& ranks, const std::vector<int>& group) {
  const int n = static_cast<int>(ranks.size());
  const int k = std::accumulate(group.begin(), group.end(), 0);
  const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
  const double e = total * k / n;
  double obs = 0;
  for (int i = 0; i < n; ++i)
    if (group[i]) obs += ranks[i];
  obs = std::fabs(obs - e);
  int at_least = 0, all = 0;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (__builtin_popcount(m) != k) continue;
    double s = 0;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) s += ranks[i];
    ++all;
    at_least += std::fabs(s - e) >= obs - 1e-9;
  }
  return double(at_least) / all;
}

}  // namespace

TEST_CASE("constant response is degenerate with p = 1") {
  FeatureTable x;
  x.add(bin({0, 1, 0, 1, 0, 1}));
  const auto r = indep::global_independence_test(num({3, 3, 3, 3, 3, 3}), x, 199, 1);
  CHECK(r.p_value == 1.0);
  CHECK(r.degenerate);
}

TEST_CASE("n = 6 permutation p matches exhaustive enumeration") {
  FeatureTable x;
  x.add(bin({0, 0, 0, 1, 1, 1}));
  const auto r = indep::global_independence_test(num({1, 2, 3, 4, 5, 6}), x, 100000, 7);
  CHECK(exact_p({1, 2, 3, 4, 5, 6}, {0, 0, 0, 1, 1, 1}) == doctest::Approx(0.1));
  CHECK(std::fabs(r.p_value - 0.1) < 0.01);
}

TEST_CASE("n = 8 permutation p matches exhaustive enumeration") {
  const std::vector<double> y{0.3, 2.1, -0.4, 1.7, 0.9, 2.8, 1.1, 0.2};
  const std::vector<int> g{0, 1, 0, 1, 0, 1, 1, 0};
  FeatureTable x;
  x.add(bin({0, 1, 0, 1, 0, 1, 1, 0}));
  std::vector<double> ranks(8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) ranks[i] += y[j] <= y[i];
  const double exact = exact_p(ranks, g);
  const auto r = indep::global_independence_test(num(y), x, 100000, 3);
  CHECK(std::fabs(r.p_value - exact) < 0.01);
  // Roles swapped: the binary column as response, y as the covariate.
  FeatureTable xy;
  xy.add(num(y, "x"));
  const auto s = indep::global_independence_test(bin({0, 1, 0, 1, 0, 1, 1, 0}), xy, 100000, 3);
  CHECK(std::fabs(s.p_value - exact) < 0.01);
}

TEST_CASE("too few permutations is a configuration error") {
  FeatureTable x;
  x.add(bin({0, 0, 1, 1}));
  CHECK_THROWS_AS(indep::global_independence_test(num({1, 2, 3, 4}), x, 50, 1), ConfigError);
}

TEST_CASE("p-value formula and minimum") {
  Rng r(2);
  std::vector<double> y(200), a(200), b(200);
  for (int i = 0; i < 200; ++i) {
    a[i] = r.uniform();
    b[i] = r.uniform();
    y[i] = 5 * a[i] + 0.1 * r.normal();
  }
  FeatureTable x;
  x.add(num(a, "a"));
  x.add(num(b, "b"));
  const auto res = indep::global_independence_test(num(y), x, 999, 4);
  CHECK(res.p_value == doctest::Approx(1.0 / 1000));
  CHECK(res.p_value == doctest::Approx((1.0 + res.exceedances) / (res.n_permutations + 1)));
  CHECK(res.per_covariate_statistics.size() == 2);
  CHECK(res.statistic == doctest::Approx(std::max(res.per_covariate_statistics[0], res.per_covariate_statistics[1])));
}

TEST_CASE("results do not depend on the thread count") {
  Rng r(5);
  std::vector<double> y(300);
  FeatureTable x;
  Column c{"c", ColumnKind::categorical, {"a", "b", "c"}, {}};
  std::vector<double> a(300);
  for (int i = 0; i < 300; ++i) {
    a[i] = r.uniform();
    c.values.push_back(r.below(3));
    y[i] = a[i] + r.normal();
  }
  x.add(num(a, "a"));
  x.add(c);
  omp_set_num_threads(1);
  const auto r1 = indep::global_independence_test(num(y), x, 1999, 8);
  omp_set_num_threads(3);
  const auto r3 = indep::global_independence_test(num(y), x, 1999, 8);
  omp_set_num_threads(omp_get_num_procs());
  CHECK(r1.exceedances == r3.exceedances);
  CHECK(r1.statistic == r3.statistic);
}

TEST_CASE("null p-values are close to uniform") {
  std::vector<double> p;
  for (std::uint64_t s = 0; s < 300; ++s) {
    Rng r(40 + s);
    std::vector<double> y(60), a(60), g(60);
    for (int i = 0; i < 60; ++i) {
      y[i] = r.normal();
      a[i] = r.uniform();
      g[i] = r.below(2);
    }
    FeatureTable x;
    x.add(num(a, "a"));
    x.add(bin(g));
    p.push_back(indep::global_independence_test(num(y), x, 199, s).p_value);
  }
  std::sort(p.begin(), p.end());
  double d = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max({d, std::fabs((i + 1.0) / p.size() - p[i]), std::fabs(double(i) / p.size() - p[i])});
  CHECK(d < 0.1);
}
