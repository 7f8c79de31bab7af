#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rhet/latent.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

using namespace rhet;

TEST_CASE("normal helpers") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-10));
  CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(stats::expit(stats::logit(0.3)) == doctest::Approx(0.3));
  CHECK(stats::student_t_quantile(0.975, 10) == doctest::Approx(2.228138851986).epsilon(1e-9));
}

TEST_CASE("bivariate normal orthant probabilities") {
  for (double rho : {-0.9, -0.5, 0.0, 0.3, 0.8, 0.99})
    CHECK(stats::bivariate_normal_cdf(0, 0, rho) == doctest::Approx(0.25 + std::asin(rho) / (2 * std::numbers::pi)).epsilon(1e-8));
  for (double h : {-1.5, 0.2, 1.1})
    for (double kk : {-0.7, 0.4})
      CHECK(stats::bivariate_normal_cdf(h, kk, 0.0) ==
            doctest::Approx(stats::normal_cdf(h) * stats::normal_cdf(kk)).epsilon(1e-10));
}

TEST_CASE("bivariate normal cdf against Monte Carlo") {
  Rng r(17);
  const double rho = 0.6, h = 0.3, k = -0.4;
  int hit = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double a = r.normal(), b = rho * a + std::sqrt(1 - rho * rho) * r.normal();
    hit += (a <= h && b <= k);
  }
  CHECK(stats::bivariate_normal_cdf(h, k, rho) == doctest::Approx(double(hit) / n).epsilon(0.01));
}

TEST_CASE("mid ranks and quantiles") {
  const std::vector<double> x{3, 1, 3, 2};
  const auto r = stats::mid_ranks(x);
  CHECK(r == std::vector<double>{3.5, 1, 3.5, 2});
  CHECK(stats::median({5, 1, 3}) == 3);
  CHECK(stats::median({4, 1, 3, 2}) == 2.5);
}

TEST_CASE("ks distance of an exact uniform grid") {
  std::vector<double> p;
  for (int i = 1; i <= 99; ++i) p.push_back(i / 100.0);
  CHECK(stats::ks_uniform(p) == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(stats::ks_uniform(std::vector<double>(10, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("kendall tau latent correlation recovers rho for continuous pairs") {
  Rng r(4);
  const double rho = 0.5;
  Column a{"a", ColumnKind::continuous, {}, {}}, b{"b", ColumnKind::continuous, {}, {}};
  for (int i = 0; i < 4000; ++i) {
    const double u = r.normal(), v = rho * u + std::sqrt(1 - rho * rho) * r.normal();
    a.values.push_back(std::exp(u));
    b.values.push_back(v * v * v);
  }
  CHECK(latent::latent_correlation(a, b) == doctest::Approx(rho).epsilon(0.06));
}
