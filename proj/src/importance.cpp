#include <algorithm>
#include <cmath>
#include <numeric>

#include "rhet/error.hpp"
#include "rhet/forest.hpp"
#include "rhet/rng.hpp"

namespace rhet::forest {

std::vector<std::string> ImportanceRanking::top(std::size_t k) const {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < std::min(k, order.size()); ++r) out.push_back(names[order[r]]);
  return out;
}

std::size_t ImportanceRanking::rank_of(const std::string& name) const {
  for (std::size_t r = 0; r < order.size(); ++r)
    if (names[order[r]] == name) return r + 1;
  return 0;
}

double ImportanceRanking::score_of(const std::string& name) const {
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == name) return scores[j];
  throw DataError("ranking has no feature '" + name + "'");
}

ImportanceRanking make_ranking(std::vector<std::string> names, std::vector<double> scores) {
  ImportanceRanking r;
  r.names = std::move(names);
  r.scores = std::move(scores);
  r.order.resize(r.scores.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
  return r;
}

namespace {

double row_loss(const Forest& f, const double* pred, double y, ClassLoss loss) {
  if (f.task == Task::regression) return (y - pred[0]) * (y - pred[0]);
  const int k_true = static_cast<int>(y);
  if (loss == ClassLoss::misclassification) {
    int arg = 0;
    for (int k = 1; k < f.n_classes; ++k)
      if (pred[k] > pred[arg]) arg = k;
    return arg == k_true ? 0.0 : 1.0;
  }
  double s = 0.0;
  for (int k = 0; k < f.n_classes; ++k) {
    const double d = pred[k] - (k == k_true ? 1.0 : 0.0);
    s += d * d;
  }
  return s;
}

// Tree walk where feature j reads `value` instead of the row's own entry.
const double* leaf_with_override(const Forest& f, const Tree& tree, const double* row, std::size_t j,
                                 double value) {
  int k = 0;
  while (tree.nodes[static_cast<std::size_t>(k)].feature >= 0) {
    const Node& nd = tree.nodes[static_cast<std::size_t>(k)];
    const auto jj = static_cast<std::size_t>(nd.feature);
    const double v = jj == j ? value : row[jj];
    bool left;
    if (f.feature_kinds[jj] == ColumnKind::categorical) {
      const auto code = static_cast<long>(v);
      left = code >= 0 && code < 64 && ((nd.left_levels >> code) & 1u);
    } else {
      left = v <= nd.threshold;
    }
    k = left ? nd.left : nd.right;
  }
  return tree.leaf_values.data() + tree.nodes[static_cast<std::size_t>(k)].value;
}

std::uint64_t path_features(const Forest& f, const Tree& tree, const double* row) {
  std::uint64_t mask = 0;
  int k = 0;
  while (tree.nodes[static_cast<std::size_t>(k)].feature >= 0) {
    const Node& nd = tree.nodes[static_cast<std::size_t>(k)];
    const auto jj = static_cast<std::size_t>(nd.feature);
    mask |= std::uint64_t{1} << jj;
    bool left;
    if (f.feature_kinds[jj] == ColumnKind::categorical) {
      const auto code = static_cast<long>(row[jj]);
      left = code >= 0 && code < 64 && ((nd.left_levels >> code) & 1u);
    } else {
      left = row[jj] <= nd.threshold;
    }
    k = left ? nd.left : nd.right;
  }
  return mask;
}

}  // namespace

ImportanceRanking variable_importance(const Forest& forest, const FeatureTable& x,
                                      std::span<const double> y, std::uint64_t seed, ClassLoss loss) {
  const std::size_t n = x.rows(), p = x.cols();
  if (p != forest.feature_names.size()) throw DataError("feature count differs from the fitted forest");
  if (n != forest.n_train || y.size() != n) throw DataError("importance needs the training rows");
  const std::vector<double> rows = Forest::row_major(x);
  const std::size_t T = forest.trees.size();
  std::vector<double> delta(T * p, 0.0);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t t = 0; t < T; ++t) {
    const Tree& tree = forest.trees[t];
    const auto& oob = tree.oob_rows;
    if (oob.empty()) continue;
    // Per OOB row: its loss and the features on its root-to-leaf path. A
    // permutation of j only moves rows whose path visits a j split.
    std::vector<double> row_base(oob.size());
    std::vector<std::uint64_t> path(oob.size(), ~std::uint64_t{0});
    double base = 0.0;
    for (std::size_t r = 0; r < oob.size(); ++r) {
      const double* row = rows.data() + oob[r] * p;
      row_base[r] = row_loss(forest, forest.leaf_for(t, row), y[oob[r]], loss);
      base += row_base[r];
      if (p <= 64) path[r] = path_features(forest, tree, row);
    }
    std::vector<std::uint32_t> perm;
    for (std::size_t j = 0; j < p; ++j) {
      // A feature the tree never splits on cannot change its predictions.
      if (!tree.used[j]) continue;
      perm = oob;
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(j)}));
      rng.shuffle(std::span<std::uint32_t>(perm));
      double permuted = 0.0;
      for (std::size_t r = 0; r < oob.size(); ++r) {
        const std::uint32_t i = oob[r];
        if (!((path[r] >> (j & 63)) & 1u)) {
          permuted += row_base[r];
          continue;
        }
        const double v = rows[perm[r] * p + j];
        permuted += row_loss(forest, leaf_with_override(forest, tree, rows.data() + i * p, j, v), y[i], loss);
      }
      delta[t * p + j] = (permuted - base) / static_cast<double>(oob.size());
    }
  }

  std::vector<double> scores(p, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < p; ++j) scores[j] += delta[t * p + j];
  for (double& s : scores) s /= static_cast<double>(T);
  return make_ranking(forest.feature_names, std::move(scores));
}

}  // namespace rhet::forest
