#include "rhet/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rhet/error.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::forest {

const char* to_string(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

int ForestParams::resolved_mtry(std::size_t p) const {
  if (mtry > 0) return mtry;
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)))));
}

void ForestParams::validate(std::size_t p) const {
  if (p == 0) throw DataError("forest needs at least one feature");
  if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (mtry < 0 || resolved_mtry(p) > static_cast<int>(p))
    throw ConfigError("mtry must be in [1, " + std::to_string(p) + "]");
  if (min_node_size < 1) throw ConfigError("min_node_size must be >= 1");
  if (!(split_alpha > 0.0 && split_alpha <= 1.0)) throw ConfigError("split_alpha must be in (0, 1]");
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0))
    throw ConfigError("subsample_fraction must be in (0, 1]");
}

std::size_t Tree::leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature < 0; }));
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::vector<double> Forest::row_major(const FeatureTable& x) {
  const std::size_t n = x.rows(), p = x.cols();
  std::vector<double> out(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto& v = x.col(j).values;
    for (std::size_t i = 0; i < n; ++i) out[i * p + j] = v[i];
  }
  return out;
}

namespace {

bool goes_left(const Node& node, ColumnKind kind, double v) {
  if (kind == ColumnKind::categorical) {
    const auto code = static_cast<long>(v);
    return code >= 0 && code < 64 && ((node.left_levels >> code) & 1u);
  }
  return v <= node.threshold;
}

}  // namespace

const double* Forest::leaf_for(std::size_t t, const double* row) const {
  const Tree& tree = trees[t];
  int k = 0;
  while (tree.nodes[static_cast<std::size_t>(k)].feature >= 0) {
    const Node& nd = tree.nodes[static_cast<std::size_t>(k)];
    const auto j = static_cast<std::size_t>(nd.feature);
    k = goes_left(nd, feature_kinds[j], row[j]) ? nd.left : nd.right;
  }
  return tree.leaf_values.data() + tree.nodes[static_cast<std::size_t>(k)].value;
}

namespace {

void check_features(const Forest& f, const FeatureTable& x) {
  if (x.cols() != f.feature_names.size()) throw DataError("feature count differs from the fitted forest");
  for (std::size_t j = 0; j < x.cols(); ++j)
    if (x.col(j).name != f.feature_names[j])
      throw DataError("feature '" + x.col(j).name + "' differs from fitted '" + f.feature_names[j] + "'");
}

}  // namespace

std::vector<double> Forest::predict(const FeatureTable& x) const {
  check_features(*this, x);
  const std::size_t n = x.rows(), p = x.cols();
  const int w = output_width();
  const std::vector<double> rows = row_major(x);
  std::vector<double> out(n * static_cast<std::size_t>(w), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double* o = out.data() + i * static_cast<std::size_t>(w);
    for (std::size_t t = 0; t < trees.size(); ++t) {
      const double* leaf = leaf_for(t, rows.data() + i * p);
      for (int k = 0; k < w; ++k) o[k] += leaf[k];
    }
    for (int k = 0; k < w; ++k) o[k] /= static_cast<double>(trees.size());
  }
  return out;
}

std::vector<double> Forest::predict_oob(const FeatureTable& x) const {
  check_features(*this, x);
  if (x.rows() != n_train) throw DataError("OOB prediction needs the training rows");
  const std::size_t n = x.rows(), p = x.cols();
  const auto w = static_cast<std::size_t>(output_width());
  const std::vector<double> rows = row_major(x);
  std::vector<double> sum(n * w, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t t = 0; t < trees.size(); ++t) {
    for (std::uint32_t i : trees[t].oob_rows) {
      const double* leaf = leaf_for(t, rows.data() + i * p);
      for (std::size_t k = 0; k < w; ++k) sum[i * w + k] += leaf[k];
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < w; ++k)
      sum[i * w + k] = count[i] ? sum[i * w + k] / count[i] : std::nan("");
  return sum;
}

namespace {

struct Candidate {
  int feature;
  double stat;
  double pvalue;
};

// Shared read-only inputs for growing the trees of one forest.
struct Problem {
  std::size_t n = 0, p = 0;
  std::vector<double> key;      // column-major p x n: mid-ranks or level codes
  std::vector<std::uint32_t> sort_key;  // twice the mid-rank (an integer) or level code
  std::vector<std::uint32_t> order;     // per feature, rows sorted by (sort_key, row)
  std::vector<double> raw;      // column-major p x n raw values
  std::vector<int> levels;      // per feature: 0 for numeric, else level count
  std::vector<double> h;        // row-major n x q response components
  int q = 1;
  std::vector<double> y;        // regression value or class code
  Task task = Task::regression;
  int n_classes = 0;
};

class Grower {
 public:
  Grower(const Problem& pr, const ForestParams& params, std::uint64_t seed)
      : pr_(pr), params_(params), rng_(seed), mtry_(params.resolved_mtry(pr.p)) {
    features_.resize(pr.p);
    std::iota(features_.begin(), features_.end(), 0);
    hbar_.resize(static_cast<std::size_t>(pr.q));
    shh_.resize(static_cast<std::size_t>(pr.q));
    sgh_.resize(static_cast<std::size_t>(pr.q));
    mark_.assign(pr.n, 0);
  }

  Tree grow() {
    Tree tree;
    tree.used.assign(pr_.p, 0);
    const std::size_t n = pr_.n;
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    std::size_t n_sub = static_cast<std::size_t>(std::llround(params_.subsample_fraction * n));
    n_sub = std::clamp<std::size_t>(n_sub, 1, n > 1 ? n - 1 : 1);
    rng_.partial_shuffle(std::span<std::uint32_t>(all), n_sub);
    idx_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_sub));
    tree.oob_rows.assign(all.begin() + static_cast<std::ptrdiff_t>(n_sub), all.end());
    std::sort(idx_.begin(), idx_.end());
    std::sort(tree.oob_rows.begin(), tree.oob_rows.end());

    struct Pending {
      int node;
      std::size_t begin, end;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, idx_.size()});
    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      Node split;
      std::size_t n_left = 0;
      if (try_split(cur.begin, cur.end, split, n_left)) {
        tree.used[static_cast<std::size_t>(split.feature)] = 1;
        split.left = static_cast<int>(tree.nodes.size());
        split.right = split.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(cur.node)] = split;
        // Right pushed first so the left subtree is expanded first.
        stack.push_back({split.right, cur.begin + n_left, cur.end});
        stack.push_back({split.left, cur.begin, cur.begin + n_left});
      } else {
        make_leaf(tree, tree.nodes[static_cast<std::size_t>(cur.node)], cur.begin, cur.end);
      }
    }
    return tree;
  }

 private:
  void make_leaf(Tree& tree, Node& node, std::size_t b, std::size_t e) {
    node = Node{};
    node.value = static_cast<int>(tree.leaf_values.size());
    const double m = static_cast<double>(e - b);
    if (pr_.task == Task::regression) {
      double s = 0.0;
      for (std::size_t r = b; r < e; ++r) s += pr_.y[idx_[r]];
      tree.leaf_values.push_back(s / m);
    } else {
      std::vector<double> freq(static_cast<std::size_t>(pr_.n_classes), 0.0);
      for (std::size_t r = b; r < e; ++r) freq[static_cast<std::size_t>(pr_.y[idx_[r]])] += 1.0;
      for (double& f : freq) tree.leaf_values.push_back(f / m);
    }
  }

  // Gathers the node response and its moments; false when it is constant.
  bool node_moments(std::size_t b, std::size_t e) {
    const auto q = static_cast<std::size_t>(pr_.q);
    const std::size_t m = e - b;
    hn_.resize(m * q);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t k = 0; k < q; ++k) hn_[r * q + k] = pr_.h[idx_[b + r] * q + k];
    const double md = static_cast<double>(m);
    bool any = false;
    for (std::size_t k = 0; k < q; ++k) {
      double s = 0.0, ss = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += hn_[r * q + k];
      hbar_[k] = s / md;
      for (std::size_t r = 0; r < m; ++r) {
        const double d = hn_[r * q + k] - hbar_[k];
        ss += d * d;
      }
      double raw = 0.0;
      for (std::size_t r = 0; r < m; ++r) raw += hn_[r * q + k] * hn_[r * q + k];
      shh_[k] = ss > 1e-12 * raw ? ss : 0.0;
      any = any || shh_[k] > 0.0;
    }
    return any;
  }

  // Multiplicity-adjusted p-value for the max of `tests` standardized stats.
  static double sidak(double c, int tests) {
    const double p1 = std::min(1.0, 2.0 * stats::normal_upper_tail(c));
    if (tests <= 1) return p1;
    return -std::expm1(tests * std::log1p(-p1));
  }

  Candidate score_numeric(int j, std::size_t b, std::size_t e) {
    const auto q = static_cast<std::size_t>(pr_.q);
    const double* g = pr_.key.data() + static_cast<std::size_t>(j) * pr_.n;
    const std::size_t m = e - b;
    const double md = static_cast<double>(m);
    double sg = 0.0, sgg = 0.0;
    double c = 0.0;
    if (q == 1) {
      double sgh = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double v = g[idx_[b + r]];
        sg += v;
        sgg += v * v;
        sgh += v * hn_[r];
      }
      const double cgg = sgg - sg * sg / md;
      if (cgg <= 1e-9 * sgg || shh_[0] <= 0.0) return {j, -1.0, 1.0};
      const double cgh = sgh - sg * hbar_[0];
      c = std::fabs(cgh) / std::sqrt(cgg * shh_[0] / (md - 1.0));
    } else {
      std::fill(sgh_.begin(), sgh_.end(), 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        const double v = g[idx_[b + r]];
        sg += v;
        sgg += v * v;
        for (std::size_t k = 0; k < q; ++k) sgh_[k] += v * hn_[r * q + k];
      }
      const double cgg = sgg - sg * sg / md;
      if (cgg <= 1e-9 * sgg) return {j, -1.0, 1.0};
      for (std::size_t k = 0; k < q; ++k)
        if (shh_[k] > 0.0)
          c = std::max(c, std::fabs(sgh_[k] - sg * hbar_[k]) / std::sqrt(cgg * shh_[k] / (md - 1.0)));
    }
    return {j, c, sidak(c, pr_.q)};
  }

  Candidate score_categorical(int j, std::size_t b, std::size_t e) {
    const auto q = static_cast<std::size_t>(pr_.q);
    const auto L = static_cast<std::size_t>(pr_.levels[static_cast<std::size_t>(j)]);
    const double* g = pr_.key.data() + static_cast<std::size_t>(j) * pr_.n;
    const std::size_t m = e - b;
    const double md = static_cast<double>(m);
    cnt_.assign(L, 0.0);
    lsum_.assign(L * q, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const auto l = static_cast<std::size_t>(g[idx_[b + r]]);
      cnt_[l] += 1.0;
      for (std::size_t k = 0; k < q; ++k) lsum_[l * q + k] += hn_[r * q + k];
    }
    int present = 0;
    for (double c : cnt_) present += c > 0.0;
    if (present < 2) return {j, -1.0, 1.0};
    double c = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const double a = cnt_[l];
      if (a <= 0.0 || a >= md) continue;
      for (std::size_t k = 0; k < q; ++k) {
        if (shh_[k] <= 0.0) continue;
        const double t = lsum_[l * q + k] - a * hbar_[k];
        const double v = a * (md - a) * shh_[k] / (md * (md - 1.0));
        c = std::max(c, std::fabs(t) / std::sqrt(v));
      }
    }
    // With two levels present the indicators carry the same information.
    const int tests = (present == 2 ? 1 : present) * pr_.q;
    return {j, c, sidak(c, tests)};
  }

  // keys_[0..m) holds (order key << 32 | row) for the node rows. Sorts them
  // unless already sorted,
  // rewrites the node's row order and returns the best admissible prefix
  // size (0 when none).
  std::size_t best_cut(std::size_t b, std::size_t e, bool sort = true) {
    const std::size_t m = e - b;
    if (sort) std::sort(keys_.begin(), keys_.begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t r = 0; r < m; ++r) idx_[b + r] = static_cast<std::uint32_t>(keys_[r]);
    const auto q = static_cast<std::size_t>(pr_.q);
    const auto minc = static_cast<std::size_t>(params_.min_node_size);
    const double md = static_cast<double>(m);
    std::fill(sgh_.begin(), sgh_.end(), 0.0);
    double best = -1.0;
    std::size_t best_a = 0;
    for (std::size_t a = 1; a < m; ++a) {
      const std::uint32_t i = idx_[b + a - 1];
      for (std::size_t k = 0; k < q; ++k) sgh_[k] += pr_.h[i * q + k];
      if (a < minc || m - a < minc) continue;
      if ((keys_[a - 1] >> 32) == (keys_[a] >> 32)) continue;
      const double ad = static_cast<double>(a);
      double c = 0.0;
      for (std::size_t k = 0; k < q; ++k) {
        if (shh_[k] <= 0.0) continue;
        const double t = sgh_[k] - ad * hbar_[k];
        const double v = ad * (md - ad) * shh_[k] / (md * (md - 1.0));
        c = std::max(c, std::fabs(t) / std::sqrt(v));
      }
      if (c > best) {
        best = c;
        best_a = a;
      }
    }
    return best_a;
  }

  bool cut_numeric(int j, std::size_t b, std::size_t e, Node& node, std::size_t& n_left) {
    const std::size_t off = static_cast<std::size_t>(j) * pr_.n;
    const std::uint32_t* sk = pr_.sort_key.data() + off;
    const std::size_t m = e - b;
    keys_.resize(m);
    // Large nodes: filter the presorted global order instead of sorting;
    // both give rows ordered by (key, row).
    const double md = static_cast<double>(m);
    const bool scan = 3.0 * static_cast<double>(pr_.n) < 10.0 * md * std::log2(md);
    if (scan) {
      ++stamp_;
      for (std::size_t r = b; r < e; ++r) mark_[idx_[r]] = stamp_;
      const std::uint32_t* ord = pr_.order.data() + off;
      std::size_t k = 0;
      for (std::size_t t = 0; t < pr_.n; ++t) {
        const std::uint32_t i = ord[t];
        if (mark_[i] == stamp_) keys_[k++] = (std::uint64_t{sk[i]} << 32) | i;
      }
    } else {
      for (std::size_t r = b; r < e; ++r) keys_[r - b] = (std::uint64_t{sk[idx_[r]]} << 32) | idx_[r];
    }
    const std::size_t a = best_cut(b, e, !scan);
    if (a == 0) return false;
    node.feature = j;
    node.threshold = pr_.raw[off + idx_[b + a - 1]];
    n_left = a;
    return true;
  }

  bool cut_categorical(int j, std::size_t b, std::size_t e, Node& node, std::size_t& n_left) {
    const auto L = static_cast<std::size_t>(pr_.levels[static_cast<std::size_t>(j)]);
    const double* g = pr_.key.data() + static_cast<std::size_t>(j) * pr_.n;
    // Level order by node mean of the first response component.
    std::vector<double> cnt(L, 0.0), sum(L, 0.0);
    const auto q = static_cast<std::size_t>(pr_.q);
    for (std::size_t r = b; r < e; ++r) {
      const auto l = static_cast<std::size_t>(g[idx_[r]]);
      cnt[l] += 1.0;
      sum[l] += pr_.h[idx_[r] * q];
    }
    std::vector<std::size_t> lv;
    for (std::size_t l = 0; l < L; ++l)
      if (cnt[l] > 0.0) lv.push_back(l);
    std::stable_sort(lv.begin(), lv.end(),
                     [&](std::size_t u, std::size_t v) { return sum[u] / cnt[u] < sum[v] / cnt[v]; });
    std::vector<std::uint32_t> rank_of_level(L, 0);
    for (std::size_t r = 0; r < lv.size(); ++r) rank_of_level[lv[r]] = static_cast<std::uint32_t>(r);
    keys_.resize(e - b);
    for (std::size_t r = b; r < e; ++r)
      keys_[r - b] = (std::uint64_t{rank_of_level[static_cast<std::size_t>(g[idx_[r]])]} << 32) | idx_[r];
    const std::size_t a = best_cut(b, e);
    if (a == 0) return false;
    const std::uint64_t last = keys_[a - 1] >> 32;
    std::uint64_t mask = 0;
    for (std::size_t r = 0; r < lv.size(); ++r)
      if (r <= last) mask |= std::uint64_t{1} << lv[r];
    node.feature = j;
    node.left_levels = mask;
    n_left = a;
    return true;
  }

  bool try_split(std::size_t b, std::size_t e, Node& node, std::size_t& n_left) {
    const std::size_t m = e - b;
    if (m < 2 * static_cast<std::size_t>(params_.min_node_size) || m < 2) return false;
    if (!node_moments(b, e)) return false;

    rng_.partial_shuffle(std::span<int>(features_), static_cast<std::size_t>(mtry_));
    cands_.clear();
    for (int t = 0; t < mtry_; ++t) {
      const int j = features_[static_cast<std::size_t>(t)];
      const Candidate c = pr_.levels[static_cast<std::size_t>(j)] > 0 ? score_categorical(j, b, e)
                                                                      : score_numeric(j, b, e);
      if (c.stat > 0.0) cands_.push_back(c);
    }
    std::sort(cands_.begin(), cands_.end(), [](const Candidate& u, const Candidate& v) {
      if (u.pvalue != v.pvalue) return u.pvalue < v.pvalue;
      if (u.stat != v.stat) return u.stat > v.stat;
      return u.feature < v.feature;
    });
    for (const Candidate& c : cands_) {
      if (params_.split_alpha < 1.0 && std::min(1.0, c.pvalue * mtry_) > params_.split_alpha) break;
      const bool ok = pr_.levels[static_cast<std::size_t>(c.feature)] > 0
                          ? cut_categorical(c.feature, b, e, node, n_left)
                          : cut_numeric(c.feature, b, e, node, n_left);
      if (ok) return true;
    }
    return false;
  }

  const Problem& pr_;
  const ForestParams& params_;
  Rng rng_;
  int mtry_;
  std::vector<int> features_;
  std::vector<std::uint32_t> idx_;
  std::vector<double> hbar_, shh_, sgh_, cnt_, lsum_, hn_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<Candidate> cands_;
};

}  // namespace

Forest fit(const FeatureTable& x, std::span<const double> y, Task task, const ForestParams& params) {
  const std::size_t n = x.rows(), p = x.cols();
  params.validate(p);
  if (y.size() != n) throw DataError("response length differs from feature rows");
  if (n < static_cast<std::size_t>(params.min_node_size) || n < 2)
    throw DataError("forest needs at least min_node_size (" + std::to_string(params.min_node_size) +
                    ") rows, got " + std::to_string(n));
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("non-finite response value");

  Forest f;
  f.task = task;
  f.params = params;
  f.n_train = n;
  f.feature_names = x.names();

  Problem pr;
  pr.n = n;
  pr.p = p;
  pr.task = task;
  pr.key.resize(n * p);
  pr.raw.resize(n * p);
  pr.levels.assign(p, 0);
  pr.sort_key.resize(n * p);
  pr.order.resize(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    const Column& c = x.col(j);
    f.feature_kinds.push_back(c.kind);
    std::copy(c.values.begin(), c.values.end(), pr.raw.begin() + static_cast<std::ptrdiff_t>(j * n));
    if (c.kind == ColumnKind::categorical) {
      if (c.n_levels() > 64) throw DataError("categorical feature '" + c.name + "' has more than 64 levels");
      for (double v : c.values)
        if (!(v >= 0 && v < c.n_levels() && v == std::floor(v)))
          throw DataError("invalid level code in feature '" + c.name + "'");
      pr.levels[j] = c.n_levels();
      std::copy(c.values.begin(), c.values.end(), pr.key.begin() + static_cast<std::ptrdiff_t>(j * n));
    } else {
      const auto r = stats::mid_ranks(c.values);
      std::copy(r.begin(), r.end(), pr.key.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    for (std::size_t i = 0; i < n; ++i)
      pr.sort_key[j * n + i] = static_cast<std::uint32_t>(std::lround(2.0 * pr.key[j * n + i]));
    auto ord = pr.order.begin() + static_cast<std::ptrdiff_t>(j * n);
    std::iota(ord, ord + static_cast<std::ptrdiff_t>(n), 0u);
    const std::uint32_t* sk = pr.sort_key.data() + j * n;
    std::sort(ord, ord + static_cast<std::ptrdiff_t>(n),
              [&](std::uint32_t u, std::uint32_t v) { return sk[u] < sk[v] || (sk[u] == sk[v] && u < v); });
  }
  pr.y.assign(y.begin(), y.end());
  if (task == Task::regression) {
    pr.q = 1;
    pr.h = pr.y;
  } else {
    int k_max = 0;
    for (double v : y) {
      if (!(v >= 0 && v == std::floor(v))) throw DataError("class labels must be non-negative integers");
      k_max = std::max(k_max, static_cast<int>(v));
    }
    pr.n_classes = k_max + 1;
    f.n_classes = pr.n_classes;
    std::vector<int> seen(static_cast<std::size_t>(pr.n_classes), 0);
    for (double v : y) seen[static_cast<std::size_t>(v)] = 1;
    if (std::accumulate(seen.begin(), seen.end(), 0) < 2)
      throw DataError("classification response needs at least two classes present");
    // Two classes: the class-1 indicator alone; otherwise one indicator per class.
    pr.q = pr.n_classes == 2 ? 1 : pr.n_classes;
    pr.h.assign(n * static_cast<std::size_t>(pr.q), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int k = static_cast<int>(y[i]);
      if (pr.q == 1)
        pr.h[i] = k == 1 ? 1.0 : 0.0;
      else
        pr.h[i * static_cast<std::size_t>(pr.q) + static_cast<std::size_t>(k)] = 1.0;
    }
  }

  f.trees.resize(static_cast<std::size_t>(params.n_trees));
#pragma omp parallel for schedule(dynamic, 8)
  for (int t = 0; t < params.n_trees; ++t) {
    Grower g(pr, params, derive_seed(params.seed, {static_cast<std::uint64_t>(t)}));
    f.trees[static_cast<std::size_t>(t)] = g.grow();
  }
  return f;
}

}  // namespace rhet::forest
