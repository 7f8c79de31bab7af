#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "rhet/error.hpp"
#include "rhet/forest.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

using namespace rhet;

namespace {

Column continuous(const std::string& name, std::vector<double> v) {
  return Column{name, ColumnKind::continuous, {}, std::move(v)};
}

FeatureTable noise_table(Rng& r, std::size_t n, std::size_t p, std::size_t first = 0) {
  FeatureTable t;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> v(n);
    for (auto& x : v) x = r.uniform();
    t.add(continuous("N" + std::to_string(first + j), std::move(v)));
  }
  return t;
}

forest::ForestParams small(std::uint64_t seed, int trees = 100) {
  forest::ForestParams p;
  p.n_trees = trees;
  p.seed = seed;
  p.min_node_size = 10;
  return p;
}

}  // namespace

TEST_CASE("constant response gives single-leaf trees") {
  Rng r(1);
  auto x = noise_table(r, 100, 3);
  std::vector<double> y(100, 2.5);
  const auto f = forest::fit(x, y, forest::Task::regression, small(1, 20));
  for (const auto& t : f.trees) CHECK(t.leaves() == 1);
  for (double v : f.predict(x)) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("y = x1 is fitted well out of bag") {
  Rng r(2);
  std::vector<double> x1(200);
  for (auto& v : x1) v = r.uniform();
  FeatureTable x;
  x.add(continuous("x1", x1));
  const auto f = forest::fit(x, x1, forest::Task::regression, small(2));
  const auto oob = f.predict_oob(x);
  double mse = 0;
  int m = 0;
  for (std::size_t i = 0; i < oob.size(); ++i)
    if (!std::isnan(oob[i])) {
      mse += (oob[i] - x1[i]) * (oob[i] - x1[i]);
      ++m;
    }
  CHECK(mse / m < stats::variance(x1) / 10);
}

TEST_CASE("separable classes are classified out of bag") {
  Rng r(3);
  auto x = noise_table(r, 300, 4);
  std::vector<double> y(300);
  for (std::size_t i = 0; i < 300; ++i) y[i] = x.at(i, 0) > 0.5 ? 1.0 : 0.0;
  const auto f = forest::fit(x, y, forest::Task::classification, small(3));
  const auto prob = f.predict_oob(x);
  int right = 0, m = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    if (std::isnan(prob[2 * i])) continue;
    ++m;
    right += ((prob[2 * i + 1] > prob[2 * i]) == (y[i] == 1.0));
  }
  CHECK(double(right) / m > 0.95);
}

TEST_CASE("leaves respect min_node_size and OOB sets are non-empty") {
  Rng r(4);
  auto x = noise_table(r, 250, 5);
  std::vector<double> y(250);
  for (std::size_t i = 0; i < 250; ++i) y[i] = x.at(i, 1) + 0.3 * r.normal();
  auto p = small(4, 30);
  p.min_node_size = 15;
  const auto f = forest::fit(x, y, forest::Task::regression, p);
  const auto rows = forest::Forest::row_major(x);
  for (std::size_t t = 0; t < f.trees.size(); ++t) {
    CHECK(!f.trees[t].oob_rows.empty());
    // Count in-bag rows per leaf.
    std::vector<char> oob(250, 0);
    for (auto i : f.trees[t].oob_rows) oob[i] = 1;
    std::map<const double*, int> count;
    for (std::size_t i = 0; i < 250; ++i)
      if (!oob[i]) ++count[f.leaf_for(t, rows.data() + i * 5)];
    for (const auto& [leaf, c] : count) CHECK(c >= 15);
  }
}

TEST_CASE("fitting and importance are reproducible") {
  Rng r(5);
  auto x = noise_table(r, 200, 6);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = x.at(i, 2) + 0.5 * r.normal();
  const auto a = forest::fit(x, y, forest::Task::regression, small(9, 50));
  const auto b = forest::fit(x, y, forest::Task::regression, small(9, 50));
  CHECK(a.predict(x) == b.predict(x));
  const auto va = forest::variable_importance(a, x, y, 1);
  const auto vb = forest::variable_importance(b, x, y, 1);
  CHECK(va.scores == vb.scores);
  CHECK(va.order.front() == 2);
}

TEST_CASE("fit rejects tiny data and bad parameters") {
  Rng r(6);
  auto x = noise_table(r, 8, 2);
  std::vector<double> y(8, 1.0);
  CHECK_THROWS(forest::fit(x, y, forest::Task::regression, small(1)));
  auto x2 = noise_table(r, 100, 2);
  std::vector<double> y2(100, 0.0);
  CHECK_THROWS(forest::fit(x2, y2, forest::Task::classification, small(1)));
  auto p = small(1);
  p.mtry = 5;
  std::vector<double> y3(100, 1.0);
  CHECK_THROWS_AS(forest::fit(x2, y3, forest::Task::regression, p), ConfigError);
}

TEST_CASE("ranking ties are broken by ascending index") {
  const auto r = forest::make_ranking({"a", "b", "c", "d"}, {1.0, 2.0, 1.0, 2.0});
  CHECK(r.order == std::vector<std::size_t>{1, 3, 0, 2});
  CHECK(r.rank_of("c") == 4);
  CHECK(r.rank_of("zz") == 0);
}

TEST_CASE("strictly monotone transforms leave the forest unchanged") {
  Rng r(7);
  auto x = noise_table(r, 200, 4);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = x.at(i, 0) - x.at(i, 3) + 0.4 * r.normal();
  auto xt = x;
  for (auto& v : xt.col(0).values) v = std::exp(5 * v);
  for (auto& v : xt.col(3).values) v = -1.0 / (v + 0.1);
  const auto a = forest::fit(x, y, forest::Task::regression, small(3, 40));
  const auto b = forest::fit(xt, y, forest::Task::regression, small(3, 40));
  CHECK(a.predict_oob(x) == b.predict_oob(xt));
  CHECK(forest::variable_importance(a, x, y, 2).order == forest::variable_importance(b, xt, y, 2).order);
}

TEST_CASE("pure-noise feature importance is centred at zero") {
  std::vector<double> vi;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng r(100 + s);
    auto x = noise_table(r, 150, 3);
    std::vector<double> y(150);
    for (std::size_t i = 0; i < 150; ++i) y[i] = x.at(i, 0) + 0.5 * r.normal();
    const auto f = forest::fit(x, y, forest::Task::regression, small(s, 40));
    vi.push_back(forest::variable_importance(f, x, y, s).scores[2]);
  }
  const double se = std::sqrt(stats::variance(vi) / vi.size());
  CHECK(std::fabs(stats::mean(vi)) <= 2 * se + 1e-12);
}

TEST_CASE("single strong predictor among 30 noise features ranks first") {
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng r(1000 + s);
    auto x = noise_table(r, 200, 31);
    std::vector<double> y(200);
    for (std::size_t i = 0; i < 200; ++i) y[i] = 2.0 * x.at(i, 17) + 0.5 * r.normal();
    const auto f = forest::fit(x, y, forest::Task::regression, small(s, 50));
    hits += forest::variable_importance(f, x, y, s).order.front() == 17;
  }
  CHECK(hits >= 95);
}

TEST_CASE("a duplicated feature does not inflate unrelated importance") {
  std::vector<double> d;
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng r(500 + s);
    auto x = noise_table(r, 150, 4);
    std::vector<double> y(150);
    for (std::size_t i = 0; i < 150; ++i) y[i] = x.at(i, 0) + 0.5 * r.normal();
    auto xd = x;
    xd.add(continuous("dup", x.col(0).values));
    const auto f1 = forest::fit(x, y, forest::Task::regression, small(s, 40));
    const auto f2 = forest::fit(xd, y, forest::Task::regression, small(s, 40));
    d.push_back(forest::variable_importance(f2, xd, y, s).scores[3] - forest::variable_importance(f1, x, y, s).scores[3]);
  }
  const double se = std::sqrt(stats::variance(d) / d.size());
  CHECK(stats::mean(d) <= 2 * se + 1e-12);
}

TEST_CASE("categorical splits separate levels by mean response") {
  Rng r(8);
  Column c{"c", ColumnKind::categorical, {"a", "b", "c", "d"}, {}};
  std::vector<double> y;
  for (int i = 0; i < 400; ++i) {
    const int l = static_cast<int>(r.below(4));
    c.values.push_back(l);
    y.push_back((l == 1 || l == 3 ? 2.0 : 0.0) + 0.2 * r.normal());
  }
  FeatureTable x;
  x.add(c);
  const auto f = forest::fit(x, y, forest::Task::regression, small(1, 20));
  const auto pred = f.predict(x);
  for (std::size_t i = 0; i < 400; ++i) CHECK(std::fabs(pred[i] - ((x.at(i, 0) == 1 || x.at(i, 0) == 3) ? 2.0 : 0.0)) < 0.2);
}
