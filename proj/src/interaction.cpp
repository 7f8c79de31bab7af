#include <cmath>

#include <Eigen/Dense>

#include "rhet/error.hpp"
#include "rhet/workflow.hpp"

namespace rhet::workflow {

std::vector<RegionEstimate> fit_interaction_model(std::span<const double> y, std::span<const int> z,
                                                  std::span<const int> region) {
  const std::size_t n = y.size();
  if (z.size() != n || region.size() != n) throw DataError("interaction model inputs differ in length");
  std::size_t cell[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < n; ++i) {
    if ((z[i] != 0 && z[i] != 1) || (region[i] != 0 && region[i] != 1))
      throw DataError("treatment and region must be 0/1");
    ++cell[region[i]][z[i]];
  }
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < 2; ++a)
      if (cell[r][a] == 0)
        throw DataError("interaction model: no patients in arm Z=" + std::to_string(a) + " of Region " +
                        std::to_string(r));
  if (n <= 4) throw DataError("interaction model needs more than 4 patients");

  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d(ni, 4);
  Eigen::VectorXd yv(ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const auto k = static_cast<std::size_t>(i);
    d(i, 0) = 1.0;
    d(i, 1) = z[k];
    d(i, 2) = region[k];
    d(i, 3) = z[k] * region[k];
    yv(i) = y[k];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
  const Eigen::VectorXd coef = qr.solve(yv);
  const double rss = (yv - d * coef).squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - 4);
  const Eigen::MatrixXd xtx_inv = (d.transpose() * d).inverse();
  const Eigen::MatrixXd cov = sigma2 * xtx_inv;

  std::vector<RegionEstimate> out(2);
  out[0].region = 0;
  out[0].estimate = coef(1);
  out[0].se = std::sqrt(std::max(0.0, cov(1, 1)));
  out[0].n = cell[0][0] + cell[0][1];
  out[1].region = 1;
  out[1].estimate = coef(1) + coef(3);
  out[1].se = std::sqrt(std::max(0.0, cov(1, 1) + cov(3, 3) + 2.0 * cov(1, 3)));
  out[1].n = cell[1][0] + cell[1][1];
  for (auto& e : out) {
    e.lower = e.estimate - 1.96 * e.se;
    e.upper = e.estimate + 1.96 * e.se;
  }
  return out;
}

std::vector<RegionEstimate> fit_interaction_model(const datagen::TrialDataset& dataset) {
  return fit_interaction_model(dataset.outcome, dataset.treatment, dataset.region);
}

}  // namespace rhet::workflow
