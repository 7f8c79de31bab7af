#pragma once

// Conditional-inference random forest. Split variables are chosen by the
// standardized linear association between feature and response inside the
// node, cutpoints by the maximal two-sample statistic. Numeric features enter
// through their global mid-ranks, so fits are invariant to strictly monotone
// transforms of any numeric column.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rhet/table.hpp"

namespace rhet::forest {

enum class Task { regression, classification };

const char* to_string(Task task);

struct ForestParams {
  int n_trees = 500;
  /// Features sampled per node; 0 means ceil(sqrt(p)).
  int mtry = 0;
  int min_node_size = 20;
  /// Bonferroni-adjusted p-value a node's best candidate must reach to split.
  double split_alpha = 1.0;
  double subsample_fraction = 0.632;
  std::uint64_t seed = 1;

  int resolved_mtry(std::size_t p) const;
  void validate(std::size_t p) const;
};

struct Node {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::uint64_t left_levels = 0;  // categorical: bit l set when level l goes left
  int left = -1;
  int right = -1;
  int value = 0;  // offset into Tree::leaf_values
};

struct Tree {
  std::vector<Node> nodes;
  std::vector<double> leaf_values;
  /// Out-of-bag training rows, ascending.
  std::vector<std::uint32_t> oob_rows;
  /// used[j] != 0 when some node splits on feature j.
  std::vector<std::uint8_t> used;

  std::size_t leaves() const;
  std::size_t depth() const;
};

class Forest {
 public:
  Task task = Task::regression;
  int n_classes = 0;
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> feature_kinds;
  std::vector<Tree> trees;
  ForestParams params;
  std::size_t n_train = 0;

  /// Width of a prediction: 1 for regression, n_classes otherwise.
  int output_width() const { return task == Task::regression ? 1 : n_classes; }

  /// Row-major rows x p matrix of the raw feature values in fitting order.
  static std::vector<double> row_major(const FeatureTable& x);

  /// Leaf values of tree t for one row (pointer into leaf_values).
  const double* leaf_for(std::size_t t, const double* row) const;

  /// Mean over trees. Regression: one value per row. Classification: class
  /// probabilities, rows x n_classes.
  std::vector<double> predict(const FeatureTable& x) const;

  /// Out-of-bag prediction for the training rows; rows never out of bag get NaN.
  std::vector<double> predict_oob(const FeatureTable& x) const;
};

/// Regression responses are used as given; classification responses must be
/// class codes 0..K-1 with K >= 2 classes present.
Forest fit(const FeatureTable& x, std::span<const double> y, Task task, const ForestParams& params);

enum class ClassLoss { brier, misclassification };

struct ImportanceRanking {
  std::vector<std::string> names;   // feature order of the forest
  std::vector<double> scores;       // VI per feature
  std::vector<std::size_t> order;   // descending VI, ties by ascending index

  std::vector<std::string> top(std::size_t k) const;
  /// 1-based rank of a feature; 0 when absent.
  std::size_t rank_of(const std::string& name) const;
  double score_of(const std::string& name) const;
};

/// Orders features by descending score; ties by ascending index.
ImportanceRanking make_ranking(std::vector<std::string> names, std::vector<double> scores);

/// Out-of-bag permutation importance: mean over trees of the OOB loss increase
/// when feature j is permuted among the tree's OOB rows.
ImportanceRanking variable_importance(const Forest& forest, const FeatureTable& x,
                                      std::span<const double> y, std::uint64_t seed,
                                      ClassLoss loss = ClassLoss::brier);

}  // namespace rhet::forest
