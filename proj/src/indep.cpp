#include "rhet/indep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rhet/error.hpp"
#include "rhet/kernels/kernels.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::indep {

namespace {

constexpr int block_size = 64;

// Influence-function columns of one variable, uncentered.
std::vector<std::vector<double>> score_columns(const Column& c) {
  const std::size_t n = c.values.size();
  std::vector<std::vector<double>> out;
  if (c.kind == ColumnKind::continuous) {
    out.push_back(stats::mid_ranks(c.values));
  } else if (c.kind == ColumnKind::binary) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = c.values[i] == 1.0 ? 1.0 : 0.0;
    out.push_back(std::move(v));
  } else {
    for (int l = 0; l < c.n_levels(); ++l) {
      std::vector<double> v(n);
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = c.values[i] == l ? 1.0 : 0.0;
        any = any || v[i] != 0.0;
      }
      if (any) out.push_back(std::move(v));
    }
  }
  return out;
}

void center(std::vector<double>& v) {
  const double m = stats::mean(v);
  for (double& x : v) x -= m;
}

double sum_squares(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

GlobalTestResult global_independence_test(const Column& response, const FeatureTable& covariates,
                                          int n_perm, std::uint64_t seed) {
  if (n_perm < 99) throw ConfigError("n_perm must be at least 99");
  const std::size_t n = response.values.size();
  if (n < 4) throw DataError("independence test needs n >= 4");
  if (covariates.rows() != n) throw DataError("response and covariates differ in length");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw DataError("too many rows");
  for (double v : response.values)
    if (!std::isfinite(v)) throw DataError("non-finite response value");

  GlobalTestResult res;
  res.n_permutations = n_perm;
  res.seed = seed;
  res.covariate_names = covariates.names();
  res.per_covariate_statistics.assign(covariates.cols(), 0.0);

  // Covariate components, centered, stored row-major with padded stride.
  std::vector<std::vector<double>> comps;
  std::vector<std::size_t> owner;
  for (std::size_t j = 0; j < covariates.cols(); ++j) {
    if (covariates.col(j).is_constant()) continue;
    for (auto& v : score_columns(covariates.col(j))) {
      center(v);
      if (sum_squares(v) <= 0.0) continue;
      comps.push_back(std::move(v));
      owner.push_back(j);
    }
  }
  if (comps.empty()) throw DataError("independence test needs at least one non-constant covariate");

  if (response.is_constant()) {
    res.degenerate = true;
    res.exceedances = n_perm;
    return res;
  }

  auto hs = score_columns(response);
  const std::size_t width = comps.size();
  const std::size_t stride = (width + 3) / 4 * 4;
  std::vector<double> g(n * stride, 0.0);
  for (std::size_t c = 0; c < width; ++c)
    for (std::size_t i = 0; i < n; ++i) g[i * stride + c] = comps[c][i];

  const double nd = static_cast<double>(n);
  struct Component {
    std::vector<double> h;     // centered response scores
    std::vector<double> scale; // 1 / sd of each linear statistic
    bool indicator;
    std::size_t ones;
  };
  std::vector<Component> resp;
  for (auto& h : hs) {
    Component rc;
    rc.ones = static_cast<std::size_t>(std::count(h.begin(), h.end(), 1.0));
    rc.indicator = response.kind == ColumnKind::binary;
    center(h);
    const double vh = sum_squares(h) / nd;
    if (vh <= 0.0) continue;
    rc.scale.assign(stride, 0.0);
    for (std::size_t c = 0; c < width; ++c)
      rc.scale[c] = 1.0 / std::sqrt(nd / (nd - 1.0) * vh * sum_squares(comps[c]));
    rc.h = std::move(h);
    resp.push_back(std::move(rc));
  }

  const kernels::KernelTable& kt = kernels::active();

  // Max standardized statistic for the response permuted by `idx`. For
  // indicator responses only the rows drawn into the first `ones` positions
  // matter; the centered statistic over that subset equals the full sum.
  auto max_stat = [&](const std::vector<std::uint32_t>& idx, std::vector<double>& acc,
                      std::vector<double>* per_component) {
    double best = 0.0;
    for (const auto& rc : resp) {
      std::fill(acc.begin(), acc.end(), 0.0);
      if (rc.indicator) {
        kt.gather_sum(g.data(), stride, idx.data(), rc.ones, acc.data(), width);
      } else {
        kt.gather_axpy(g.data(), stride, idx.data(), rc.h.data(), n, acc.data(), width);
      }
      best = std::max(best, kt.max_abs_scaled(acc.data(), rc.scale.data(), width));
      if (per_component)
        for (std::size_t c = 0; c < width; ++c)
          (*per_component)[c] = std::max((*per_component)[c], std::fabs(acc[c] * rc.scale[c]));
    }
    return best;
  };

  // Observed statistic: identity arrangement. For indicator responses the
  // rows holding a one are moved to the front.
  std::vector<std::uint32_t> ident(n);
  std::iota(ident.begin(), ident.end(), 0u);
  std::vector<double> acc(stride, 0.0), per_comp(width, 0.0);
  double observed = 0.0;
  for (const auto& rc : resp) {
    std::vector<std::uint32_t> front = ident;
    if (rc.indicator)
      std::stable_partition(front.begin(), front.end(), [&](std::uint32_t i) { return rc.h[i] > 0.0; });
    std::fill(acc.begin(), acc.end(), 0.0);
    if (rc.indicator)
      kt.gather_sum(g.data(), stride, front.data(), rc.ones, acc.data(), width);
    else
      kt.gather_axpy(g.data(), stride, front.data(), rc.h.data(), n, acc.data(), width);
    observed = std::max(observed, kt.max_abs_scaled(acc.data(), rc.scale.data(), width));
    for (std::size_t c = 0; c < width; ++c)
      per_comp[c] = std::max(per_comp[c], std::fabs(acc[c] * rc.scale[c]));
  }
  for (std::size_t c = 0; c < width; ++c)
    res.per_covariate_statistics[owner[c]] = std::max(res.per_covariate_statistics[owner[c]], per_comp[c]);
  res.statistic = observed;

  const double cut = observed * (1.0 - 1e-9);
  const int n_blocks = (n_perm + block_size - 1) / block_size;
  std::vector<int> block_counts(static_cast<std::size_t>(n_blocks), 0);
  bool subset_draw = resp.size() == 1 && resp[0].indicator;

  // One binary covariate against a scored response: the permutation null is
  // the same with the roles swapped, so draw the covariate's ones and sum h.
  const std::size_t cov_ones = width == 1 && covariates.col(owner[0]).kind == ColumnKind::binary
                                   ? static_cast<std::size_t>(std::count(covariates.col(owner[0]).values.begin(),
                                                                         covariates.col(owner[0]).values.end(), 1.0))
                                   : 0;
  if (!subset_draw && resp.size() == 1 && cov_ones > 0) {
    std::vector<double> hg(n * stride, 0.0);
    for (std::size_t i = 0; i < n; ++i) hg[i * stride] = resp[0].h[i];
    g = std::move(hg);
    resp[0].indicator = true;
    resp[0].ones = cov_ones;
    subset_draw = true;
  }
#pragma omp parallel
  {
    std::vector<std::uint32_t> idx(n);
    std::vector<double> a(stride, 0.0);
#pragma omp for schedule(dynamic)
    for (int b = 0; b < n_blocks; ++b) {
      std::iota(idx.begin(), idx.end(), 0u);
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
      const int lo = b * block_size, hi = std::min(n_perm, lo + block_size);
      int count = 0;
      for (int k = lo; k < hi; ++k) {
        if (subset_draw)
          rng.partial_shuffle(std::span<std::uint32_t>(idx), resp[0].ones);
        else
          rng.shuffle(std::span<std::uint32_t>(idx));
        if (max_stat(idx, a, nullptr) >= cut) ++count;
      }
      block_counts[static_cast<std::size_t>(b)] = count;
    }
  }
  res.exceedances = std::accumulate(block_counts.begin(), block_counts.end(), 0);
  res.p_value = (1.0 + res.exceedances) / (n_perm + 1.0);
  return res;
}

}  // namespace rhet::indep
