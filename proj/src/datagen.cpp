#include "rhet/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "rhet/error.hpp"
#include "rhet/rng.hpp"
#include "rhet/stats.hpp"

namespace rhet::datagen {

std::string ScenarioSpec::prognostic_description() const {
  if (id == 1)
    return prognostic_form == PrognosticForm::table ? "s*{0.5*I(X1=Y) + X11}"
                                                    : "s*{0.5*(I(X1=Y) + X11)}";
  return "s*{X14 - I(X8=N)}";
}

std::string ScenarioSpec::predictive_description() const {
  return id == 1 ? "Phi(20*(X11 - 0.5))" : "X14";
}

void ScenarioSpec::validate() const {
  if (id != 1 && id != 2) throw ConfigError("scenario id must be 1 or 2");
  if (!(s > 0.0)) throw ConfigError("scale s must be positive");
  if (!(beta1 >= 0.0)) throw ConfigError("beta1 must be non-negative");
  if (!(beta1_star > 0.0)) throw ConfigError("beta1_star must be positive");
}

ScenarioSpec scenario_spec(int id) {
  ScenarioSpec spec;
  spec.id = id;
  if (id == 1) {
    spec.x_pred_name = "X11";
    spec.beta0 = -0.106;
  } else if (id == 2) {
    spec.x_pred_name = "X14";
    spec.beta0 = 0.0;
  } else {
    throw ConfigError("scenario id must be 1 or 2");
  }
  return spec;
}

ScenarioSpec worked_example_spec() {
  ScenarioSpec spec = scenario_spec(1);
  spec.prognostic_form = PrognosticForm::worked_example;
  spec.s = 2.32;
  spec.beta0 = -0.106;
  spec.beta1 = 0.767;
  spec.beta1_star = 0.767;
  return spec;
}

namespace {

// Level code of "Y" / "N" in a binary N/Y column.
double level_code(const Column& c, const std::string& level) {
  for (int l = 0; l < c.n_levels(); ++l)
    if (c.levels[static_cast<std::size_t>(l)] == level) return l;
  throw DataError("column '" + c.name + "' has no level '" + level + "'");
}

}  // namespace

OutcomeTerms outcome_terms(const FeatureTable& x, const ScenarioSpec& spec) {
  const std::size_t n = x.rows();
  OutcomeTerms t;
  t.prognostic.resize(n);
  t.predictive.resize(n);
  if (spec.id == 1) {
    const Column& x1 = x.col(x.index_of("X1"));
    const Column& x11 = x.col(x.index_of("X11"));
    const double yes = level_code(x1, "Y");
    for (std::size_t i = 0; i < n; ++i) {
      const double ind = x1.values[i] == yes ? 1.0 : 0.0;
      t.prognostic[i] = spec.prognostic_form == PrognosticForm::table ? 0.5 * ind + x11.values[i]
                                                                      : 0.5 * (ind + x11.values[i]);
      t.predictive[i] = stats::normal_cdf(20.0 * (x11.values[i] - 0.5));
    }
  } else if (spec.id == 2) {
    const Column& x8 = x.col(x.index_of("X8"));
    const Column& x14 = x.col(x.index_of("X14"));
    const double no = level_code(x8, "N");
    for (std::size_t i = 0; i < n; ++i) {
      t.prognostic[i] = x14.values[i] - (x8.values[i] == no ? 1.0 : 0.0);
      t.predictive[i] = x14.values[i];
    }
  } else {
    throw ConfigError("scenario id must be 1 or 2");
  }
  return t;
}

void RegionSpec::validate() const {
  if (!(prevalence_target > 0.0 && prevalence_target < 1.0))
    throw ConfigError("region prevalence must be in (0, 1)");
  if (!(odds_ratio >= 1.0)) throw ConfigError("odds ratio must be >= 1");
}

FeatureTable generate_covariates(const CovariateSchema& schema, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("n must be at least 1");
  schema.validate();
  const auto p = static_cast<Eigen::Index>(schema.size());

  // LDLT tolerates singular (PSD but not PD) matrices.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(schema.latent_correlation);
  const Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd factor = ldlt.transpositionsP().transpose() *
                                 Eigen::MatrixXd(ldlt.matrixL()) * d.asDiagonal();

  // Per-column thresholds on the latent normal scale.
  std::vector<std::vector<double>> cuts(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& c = schema.columns[j];
    if (c.kind == ColumnKind::continuous) continue;
    double cum = 0.0;
    for (std::size_t l = 0; l + 1 < c.level_probs.size(); ++l) {
      cum += c.level_probs[l];
      cuts[j].push_back(stats::normal_quantile(cum));
    }
  }

  std::vector<Column> cols(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    cols[j].name = schema.columns[j].name;
    cols[j].kind = schema.columns[j].kind;
    cols[j].levels = schema.columns[j].levels;
    cols[j].values.resize(n);
  }

  Rng rng(seed);
  Eigen::VectorXd e(p), z(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) e(j) = rng.normal();
    z.noalias() = factor * e;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const double zj = z(static_cast<Eigen::Index>(j));
      if (schema.columns[j].kind == ColumnKind::continuous) {
        cols[j].values[i] = stats::normal_cdf(zj);
      } else {
        const auto& cj = cuts[j];
        cols[j].values[i] = static_cast<double>(std::upper_bound(cj.begin(), cj.end(), zj) - cj.begin());
      }
    }
  }
  return FeatureTable(std::move(cols));
}

std::vector<int> generate_treatment(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> z(n);
  for (auto& v : z) v = rng.bernoulli(0.5) ? 1 : 0;
  return z;
}

std::vector<double> generate_outcome(const FeatureTable& x, const std::vector<int>& treatment,
                                     const ScenarioSpec& spec, std::uint64_t seed, double noise_sd) {
  if (treatment.size() != x.rows()) throw DataError("treatment length does not match covariates");
  const OutcomeTerms t = outcome_terms(x, spec);
  Rng rng(seed);
  std::vector<double> y(x.rows());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double effect = spec.beta0 + spec.beta1 * t.predictive[i];
    y[i] = spec.s * t.prognostic[i] + treatment[i] * effect + noise_sd * rng.normal();
  }
  return y;
}

std::vector<int> generate_region(const std::vector<double>& x_pred, const RegionSpec& spec,
                                 std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> r(x_pred.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = rng.uniform() < stats::expit(spec.alpha0 + spec.alpha1 * x_pred[i]) ? 1 : 0;
  return r;
}

TrialDataset generate_trial(const CovariateSchema& schema, const ScenarioSpec& scenario,
                            const RegionSpec& region, std::size_t n, std::uint64_t seed) {
  scenario.validate();
  region.validate();
  TrialDataset d;
  d.schema = schema;
  d.covariates = generate_covariates(schema, n, derive_seed(seed, {1}));
  d.treatment = generate_treatment(n, derive_seed(seed, {2}));
  d.outcome = generate_outcome(d.covariates, d.treatment, scenario, derive_seed(seed, {3}));
  d.region = generate_region(d.covariates.col(d.covariates.index_of(scenario.x_pred_name)).values,
                             region, derive_seed(seed, {4}));
  return d;
}

TrialDataset mask_covariates(TrialDataset dataset, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    if (!dataset.covariates.find(name)) throw DataError("cannot mask unknown covariate '" + name + "'");
    if (!dataset.is_masked(name)) dataset.analysis_mask.push_back(name);
  }
  return dataset;
}

}  // namespace rhet::datagen
