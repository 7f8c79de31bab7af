#include <algorithm>
#include <cctype>
#include <cmath>

#include "rhet/datagen.hpp"
#include "rhet/error.hpp"

namespace rhet::datagen {

const char* to_string(Role role) {
  switch (role) {
    case Role::x1_class: return "X1-class";
    case Role::x2_class: return "X2-class";
    case Role::x3_class: return "X3-class";
    case Role::noise: return "noise";
  }
  return "?";
}

Role role_from_string(const std::string& s) {
  if (s == "X1-class") return Role::x1_class;
  if (s == "X2-class") return Role::x2_class;
  if (s == "X3-class") return Role::x3_class;
  if (s == "noise") return Role::noise;
  throw SchemaError("unknown covariate role '" + s + "'");
}

std::size_t CovariateSchema::index_of(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j].name == name) return j;
  throw SchemaError("schema has no covariate '" + name + "'");
}

bool CovariateSchema::contains(const std::string& name) const {
  return std::any_of(columns.begin(), columns.end(), [&](const auto& c) { return c.name == name; });
}

std::vector<std::string> CovariateSchema::names_with_role(Role role) const {
  std::vector<std::string> out;
  for (const auto& c : columns)
    if (c.role == role) out.push_back(c.name);
  return out;
}

void CovariateSchema::validate() const {
  const auto p = static_cast<Eigen::Index>(columns.size());
  if (p == 0) throw SchemaError("schema has no covariates");
  if (latent_correlation.rows() != p || latent_correlation.cols() != p)
    throw SchemaError("latent correlation matrix must be " + std::to_string(p) + "x" +
                      std::to_string(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::fabs(latent_correlation(i, i) - 1.0) > 1e-12)
      throw SchemaError("latent correlation diagonal must be 1");
    for (Eigen::Index j = 0; j < p; ++j) {
      const double r = latent_correlation(i, j);
      if (!(r >= -1.0 && r <= 1.0)) throw SchemaError("latent correlation outside [-1, 1]");
      if (std::fabs(r - latent_correlation(j, i)) > 1e-12)
        throw SchemaError("latent correlation matrix is not symmetric");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(latent_correlation, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw SchemaError("latent correlation matrix is not positive semi-definite");

  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& c = columns[j];
    for (std::size_t k = 0; k < j; ++k)
      if (columns[k].name == c.name) throw SchemaError("duplicate covariate '" + c.name + "'");
    if (c.kind == ColumnKind::continuous) continue;
    const std::size_t want = c.kind == ColumnKind::binary ? 2 : c.levels.size();
    if (c.levels.size() != want || c.levels.size() < 2 || c.level_probs.size() != c.levels.size())
      throw SchemaError("covariate '" + c.name + "' has inconsistent levels");
    double total = 0.0;
    for (double q : c.level_probs) {
      if (!(q > 0.0 && q < 1.0)) throw SchemaError("level probabilities of '" + c.name + "' must be in (0, 1)");
      total += q;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw SchemaError("level probabilities of '" + c.name + "' must sum to 1");
  }
}

CovariateSchema default_schema(int scenario) {
  CovariateSchema schema;
  auto add_cont = [&](const std::string& name) {
    schema.columns.push_back({name, ColumnKind::continuous, {}, {}, Role::noise});
  };
  auto add_cat = [&](const std::string& name, ColumnKind kind, std::vector<std::string> levels,
                     std::vector<double> probs) {
    schema.columns.push_back({name, kind, std::move(levels), std::move(probs), Role::noise});
  };
  add_cat("X1", ColumnKind::binary, {"N", "Y"}, {0.6, 0.4});
  add_cat("X2", ColumnKind::binary, {"N", "Y"}, {0.7, 0.3});
  add_cat("X3", ColumnKind::categorical, {"A", "B", "C"}, {0.5, 0.3, 0.2});
  add_cat("X4", ColumnKind::binary, {"N", "Y"}, {0.4, 0.6});
  add_cat("X5", ColumnKind::categorical, {"L1", "L2", "L3", "L4"}, {0.4, 0.3, 0.2, 0.1});
  add_cont("X6");
  add_cont("X7");
  add_cat("X8", ColumnKind::binary, {"N", "Y"}, {0.35, 0.65});
  for (int j = 9; j <= 30; ++j) add_cont("X" + std::to_string(j));

  const Eigen::Index p = 30;
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  auto set = [&](int a, int b, double v) {
    r(a - 1, b - 1) = v;
    r(b - 1, a - 1) = v;
  };
  // Scenario 2 proxy block around X14.
  set(14, 12, 0.86);
  set(14, 9, 0.41);
  set(12, 9, 0.36);
  set(14, 15, 0.15);
  set(12, 15, 0.12);
  set(14, 16, -0.12);
  // X11 stays close to independent of everything.
  set(11, 10, 0.12);
  set(11, 13, -0.10);
  set(11, 2, 0.08);
  // Background structure among the remaining covariates.
  set(1, 2, 0.20);
  set(4, 17, 0.25);
  set(6, 7, 0.30);
  set(18, 19, 0.40);
  set(24, 18, 0.15);
  set(20, 21, 0.50);
  set(22, 23, 0.35);
  set(25, 26, 0.45);
  set(27, 28, -0.30);
  set(29, 30, 0.20);
  schema.latent_correlation = r;

  if (scenario == 1) {
    schema.columns[schema.index_of("X11")].role = Role::x2_class;
  } else if (scenario == 2) {
    schema.columns[schema.index_of("X14")].role = Role::x2_class;
    schema.columns[schema.index_of("X12")].role = Role::x1_class;
    schema.columns[schema.index_of("X9")].role = Role::x1_class;
  } else if (scenario != 0) {
    throw ConfigError("scenario must be 0, 1 or 2");
  }
  return schema;
}

bool TrialDataset::is_masked(const std::string& name) const {
  return std::find(analysis_mask.begin(), analysis_mask.end(), name) != analysis_mask.end();
}

namespace {

// Natural order on names: alphabetic prefix, then the trailing integer.
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    const std::string digits = s.substr(k);
    return std::pair{s.substr(0, k), digits.empty() || digits.size() > 18 ? -1LL : std::stoll(digits)};
  };
  const auto sa = split(a), sb = split(b);
  if (sa != sb) return sa < sb;
  return a < b;
}

}  // namespace

FeatureTable TrialDataset::analysis_covariates() const {
  std::vector<const Column*> keep;
  for (const auto& c : covariates.columns())
    if (!is_masked(c.name)) keep.push_back(&c);
  // Column order of the file must not change any result downstream.
  std::stable_sort(keep.begin(), keep.end(), [](const Column* a, const Column* b) { return natural_less(a->name, b->name); });
  FeatureTable out;
  for (const Column* c : keep) out.add(*c);
  return out;
}

Column TrialDataset::region_column() const {
  Column c{"Region", ColumnKind::binary, {"0", "1"}, {}};
  c.values.assign(region.begin(), region.end());
  return c;
}

void TrialDataset::validate() const {
  const std::size_t n = size();
  if (n == 0) throw DataError("dataset has no patients");
  if (covariates.rows() != n || outcome.size() != n || region.size() != n)
    throw DataError("dataset columns differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    if (treatment[i] != 0 && treatment[i] != 1) throw DataError("treatment must be 0/1");
    if (region[i] != 0 && region[i] != 1) throw DataError("region must be 0/1");
    if (!std::isfinite(outcome[i])) throw DataError("non-finite outcome at row " + std::to_string(i));
  }
  for (const auto& m : analysis_mask)
    if (!covariates.find(m)) throw DataError("masked covariate '" + m + "' not in dataset");
}

}  // namespace rhet::datagen
