// End-to-end acceptance run: prints one PASS/FAIL line per criterion.
//
// RHET_ACCEPT_REPS overrides the replicate count (default 200).
// RHET_ACCEPT_DIR keeps grid results there and resumes from them; without it
// a fresh temporary directory is used.

#include <sys/wait.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>

#include "rhet/datagen.hpp"
#include "rhet/harness.hpp"
#include "rhet/indep.hpp"
#include "rhet/io.hpp"
#include "rhet/nuisance.hpp"
#include "rhet/rng.hpp"
#include "rhet/smooth.hpp"
#include "rhet/stats.hpp"
#include "rhet/workflow.hpp"

using namespace rhet;
using harness::Case;
using harness::Family;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  bool undocumented = false;
  std::vector<std::string> lines;
  // A documented failure is one an oracle ceiling explains; it still fails.
  void check(bool ok, const std::string& what, bool documented = false) {
    lines.push_back(std::string(ok ? "ok   " : documented ? "FAIL (documented) " : "FAIL ") + what);
    pass = pass && ok;
    undocumented = undocumented || (!ok && !documented);
  }
  bool documented() const { return !pass && !undocumented; }
};

std::string f3(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3f", v);
  return b;
}

std::string g4(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

void print(int id, const std::string& name, const Outcome& o) {
  const char* tag = o.pass ? "PASS" : (o.documented() ? "FAIL (documented)" : "FAIL");
  std::printf("[%s] criterion %d: %s\n", tag, id, name.c_str());
  for (const auto& l : o.lines) std::printf("        %s\n", l.c_str());
  std::fflush(stdout);
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::atoi(v) : fallback;
}

// Grid runs.

struct SubGrid {
  std::string name;
  std::vector<double> ratios, odds;
  std::vector<Case> cases;
  std::uint64_t master;
};

struct Runs {
  harness::GridConfig base;
  std::map<int, harness::Calibration> cal;
  std::map<std::string, harness::GridConfig> grids;
  std::vector<harness::ReplicateRecord> records;
  harness::MeasureSummary summary;
};

Runs run_grids(const fs::path& dir, int reps, bool resume) {
  Runs r;
  r.base = harness::default_grid();
  r.base.replicates = reps;
  for (int s : {1, 2}) {
    r.cal[s] = harness::calibrate_scenario(s, r.base);
    std::printf("calibration: scenario %d s=%.4f beta1*=%.4f power=%.3f\n", s, r.cal[s].s, r.cal[s].beta1_star,
                r.cal[s].achieved_power);
  }
  const std::vector<SubGrid> subs{
      {"corners", {0.0, 2.0}, {1.0, 10.0}, {Case::observed}, 101},
      {"diagonal", {1.0}, {2.0}, {Case::observed}, 102},
      {"recovery", {1.5, 2.0}, {2.0, 5.0}, {Case::observed}, 103},
      {"recovery_or10", {1.5}, {10.0}, {Case::observed}, 104},
      {"unobserved", {2.0}, {10.0}, {Case::unobserved}, 105},
  };
  for (const auto& sg : subs) {
    auto g = r.base;
    g.beta_ratios = sg.ratios;
    g.odds_ratios = sg.odds;
    g.cases = sg.cases;
    g.master_seed = sg.master;
    harness::RunOptions opt;
    opt.results_path = (dir / (sg.name + ".jsonl")).string();
    opt.resume = resume;
    const auto t0 = std::chrono::steady_clock::now();
    auto recs = harness::run_grid(g, r.cal, opt);
    std::printf("grid %-14s %5zu records in %.0f s\n", sg.name.c_str(), recs.size(),
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::fflush(stdout);
    r.records.insert(r.records.end(), recs.begin(), recs.end());
    r.grids[sg.name] = g;
  }
  r.summary = harness::summarize(r.records);
  return r;
}

const harness::ConfigSummary& cell(const Runs& r, int s, double br, double odds, Case c = Case::observed) {
  const auto* p = r.summary.find({s, br, odds, c});
  if (!p) throw std::runtime_error("missing configuration in the acceptance grid");
  return *p;
}

std::string where(int s, double br, double odds) {
  char b[64];
  std::snprintf(b, sizeof b, "S%d ratio=%g OR=%g", s, br, odds);
  return b;
}

// Marginal oracles. Covariates are ranked by a standardized marginal
// association and the target's position is recorded. Q2: two-group z
// against Region (rank-sum for continuous columns, the largest
// two-proportion z over levels for discrete ones). Q3: association with
// the pseudo-outcome (|Spearman| sqrt(n-1) for continuous columns, the
// largest rank-sum z over levels for discrete ones, Region included). The
// pseudo-outcome is either the true-nuisance one (true_phi) or the
// workflow's own cross-fitted estimate (feasible).
double marginal_z(const Column& c, const std::vector<int>& region) {
  const std::size_t n = region.size();
  const double n1 = std::accumulate(region.begin(), region.end(), 0.0), n0 = n - n1;
  if (n1 == 0 || n0 == 0) return 0.0;
  if (c.kind == ColumnKind::continuous) {
    const auto rk = stats::mid_ranks(c.values);
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (region[i]) w += rk[i];
    const double e = n1 * (n + 1) / 2.0, v = n0 * n1 * (n + 1) / 12.0;
    return std::fabs(w - e) / std::sqrt(v);
  }
  double best = 0;
  for (int l = 0; l < c.n_levels(); ++l) {
    double a = 0, b = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (c.values[i] == l) (region[i] ? a : b) += 1;
    const double p = (a + b) / n;
    if (p <= 0 || p >= 1) continue;
    best = std::max(best, std::fabs(a / n1 - b / n0) / std::sqrt(p * (1 - p) * (1 / n0 + 1 / n1)));
  }
  return best;
}

double rank_sum_z(const std::vector<double>& rk, const std::vector<int>& in) {
  const std::size_t n = rk.size();
  double w = 0, m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) {
      w += rk[i];
      m += 1;
    }
  if (m == 0 || m == n) return 0.0;
  return std::fabs(w - m * (n + 1) / 2.0) / std::sqrt(m * (n - m) * (n + 1) / 12.0);
}

double response_z(const Column& c, const std::vector<double>& phi_ranks) {
  const std::size_t n = phi_ranks.size();
  if (c.kind == ColumnKind::continuous) {
    const auto rc = stats::mid_ranks(c.values);
    const double mean = (n + 1) / 2.0;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (rc[i] - mean) * (phi_ranks[i] - mean);
      sxx += (rc[i] - mean) * (rc[i] - mean);
      syy += (phi_ranks[i] - mean) * (phi_ranks[i] - mean);
    }
    return sxx > 0 && syy > 0 ? std::fabs(sxy / std::sqrt(sxx * syy)) * std::sqrt(n - 1.0) : 0.0;
  }
  double best = 0;
  std::vector<int> in(n);
  for (int l = 0; l < c.n_levels(); ++l) {
    for (std::size_t i = 0; i < n; ++i) in[i] = c.values[i] == l;
    best = std::max(best, rank_sum_z(phi_ranks, in));
  }
  return best;
}

std::vector<std::string> ranked(const std::vector<std::pair<double, std::string>>& scores) {
  auto v = scores;
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.second);
  return out;
}

bool in_top(const std::vector<std::string>& r, const std::string& name, std::size_t k) {
  return std::find(r.begin(), r.begin() + std::min(k, r.size()), name) != r.begin() + std::min(k, r.size());
}

std::vector<double> true_phi(const datagen::TrialDataset& d, int scenario, const harness::Calibration& cal,
                             double ratio) {
  auto spec = datagen::scenario_spec(scenario);
  spec.s = cal.s;
  spec.beta1 = ratio * cal.beta1_star;
  const auto t = datagen::outcome_terms(d.covariates, spec);
  std::vector<double> phi(d.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double mu0 = spec.s * t.prognostic[i], eff = spec.beta0 + spec.beta1 * t.predictive[i];
    const double res = d.outcome[i] - mu0 - (d.treatment[i] ? eff : 0.0);
    phi[i] = eff + (d.treatment[i] ? 2.0 : -2.0) * res;
  }
  return phi;
}

struct OracleRates {
  double q2_top1 = 0, q2_top5 = 0, overlap = 0, region_q3_top1 = 0, median_surprise_rv = 0;
};

OracleRates oracle(const Runs& r, const std::string& grid, int s, std::size_t ri, std::size_t oi, Case c,
                   bool feasible) {
  const auto& g = r.grids.at(grid);
  const std::string target = datagen::scenario_spec(s).x_pred_name;
  const std::size_t k = g.workflow.thresholds.top_k;
  const int reps = g.replicates;
  std::vector<int> q2_1(reps), q2_5(reps), ov(reps), reg1(reps);
  std::vector<double> surprise(reps);
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) {
    auto d = harness::replicate_dataset(g, r.cal.at(s), ri, oi, rep);
    if (c == Case::unobserved) d = datagen::mask_covariates(d, {target});
    const auto phi = feasible ? workflow::pseudo_outcomes(d, harness::replicate_workflow_config(g, s, ri, oi, rep)).phi
                              : true_phi(d, s, r.cal.at(s), g.beta_ratios.at(ri));
    const auto x = d.analysis_covariates();
    const auto pr = stats::mid_ranks(phi);
    std::vector<std::pair<double, std::string>> a2, a3;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      a2.emplace_back(marginal_z(x.col(j), d.region), x.col(j).name);
      a3.emplace_back(response_z(x.col(j), pr), x.col(j).name);
    }
    const double zr = rank_sum_z(pr, d.region);
    a3.emplace_back(zr, "Region");
    const auto r2 = ranked(a2), r3 = ranked(a3);
    q2_1[rep] = r2.front() == target;
    q2_5[rep] = in_top(r2, target, k);
    ov[rep] = q2_5[rep] && in_top(r3, target, k);
    reg1[rep] = r3.front() == "Region";
    surprise[rep] = -std::log2(std::max(2.0 * (1.0 - stats::normal_cdf(zr)), 1e-300));
  }
  auto rate = [&](const std::vector<int>& v) { return double(std::accumulate(v.begin(), v.end(), 0)) / reps; };
  OracleRates o;
  o.q2_top1 = rate(q2_1);
  o.q2_top5 = rate(q2_5);
  o.overlap = rate(ov);
  o.region_q3_top1 = rate(reg1);
  std::sort(surprise.begin(), surprise.end());
  o.median_surprise_rv = reps % 2 ? surprise[reps / 2] : 0.5 * (surprise[reps / 2 - 1] + surprise[reps / 2]);
  return o;
}

// Criteria.

Outcome criterion1(const Runs& r) {
  Outcome o;
  for (int s : {1, 2}) {
    const auto& c = cell(r, s, 0.0, 1.0);
    for (Family f : {Family::p_rv, Family::p_ri, Family::p_teh})
      o.check(c.ks_uniform.at(f) < 0.1, where(s, 0, 1) + " KS(" + harness::to_string(f) + ") = " +
                                            f3(c.ks_uniform.at(f)) + " < 0.1");
  }
  return o;
}

Outcome criterion2(const Runs& r) {
  Outcome o;
  for (int s : {1, 2}) {
    const auto& imb = cell(r, s, 0.0, 10.0);
    o.check(imb.median_surprise.at(Family::p_ri) >= 3.0,
            where(s, 0, 10) + " median surprise(p_RI) = " + f3(imb.median_surprise.at(Family::p_ri)) + " >= 3");
    for (Family f : {Family::p_rv, Family::p_teh})
      o.check(imb.ks_uniform.at(f) < 0.12,
              where(s, 0, 10) + " KS(" + harness::to_string(f) + ") = " + f3(imb.ks_uniform.at(f)) + " < 0.12");
    const auto& teh = cell(r, s, 2.0, 1.0);
    o.check(teh.median_surprise.at(Family::p_teh) >= 2.0,
            where(s, 2, 1) + " median surprise(p_TEH) = " + f3(teh.median_surprise.at(Family::p_teh)) + " >= 2");
    o.check(teh.ks_uniform.at(Family::p_ri) < 0.12,
            where(s, 2, 1) + " KS(p_RI) = " + f3(teh.ks_uniform.at(Family::p_ri)) + " < 0.12");
  }
  return o;
}

// A step is documented when even the true-nuisance oracle does not rise by
// two Monte-Carlo standard errors of a median surprise (about
// 1 / (ln 2 sqrt(R)) near the null value of 1).
Outcome criterion3(const Runs& r) {
  Outcome o;
  struct Point {
    std::string grid;
    double br, odds;
    std::size_t ri, oi;
  };
  const std::vector<Point> pts{{"corners", 0, 1, 0, 0}, {"diagonal", 1, 2, 0, 0}, {"corners", 2, 10, 1, 1}};
  const double se = 1.0 / (std::log(2.0) * std::sqrt(double(r.base.replicates)));
  for (int s : {1, 2})
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const auto &p = pts[k], &q = pts[k + 1];
      const double a = cell(r, s, p.br, p.odds).median_surprise.at(Family::p_rv);
      const double b = cell(r, s, q.br, q.odds).median_surprise.at(Family::p_rv);
      std::string line = "S" + std::to_string(s) + " median surprise(p_RV) (" + g4(p.br) + "," + g4(p.odds) + ") -> (" +
                         g4(q.br) + "," + g4(q.odds) + "): " + f3(a) + " < " + f3(b);
      bool doc = false;
      if (!(a < b)) {
        const double oa = oracle(r, p.grid, s, p.ri, p.oi, Case::observed, false).median_surprise_rv;
        const double ob = oracle(r, q.grid, s, q.ri, q.oi, Case::observed, false).median_surprise_rv;
        line += " (true-nuisance oracle " + f3(oa) + " -> " + f3(ob) + ", 2 SE = " + f3(2 * se) + ")";
        doc = ob - oa < 2 * se;
      }
      o.check(a < b, line, doc);
    }
  return o;
}

// Q2 top-1 failures are documented when the marginal oracle stays below 0.9
// on the same datasets; overlap failures when the marginal ranking on the
// workflow's own pseudo-outcomes does. Either way the forest must come
// within 0.1 of its oracle.
Outcome criterion4(const Runs& r) {
  Outcome o;
  struct Cell {
    std::string grid;
    double br, odds;
    std::size_t ri, oi;
  };
  const std::vector<Cell> cells{{"corners", 0.0, 10.0, 0, 1},   {"corners", 2.0, 10.0, 1, 1},
                                {"diagonal", 1.0, 2.0, 0, 0},   {"recovery", 1.5, 2.0, 0, 0},
                                {"recovery", 1.5, 5.0, 0, 1},   {"recovery", 2.0, 2.0, 1, 0},
                                {"recovery", 2.0, 5.0, 1, 1},   {"recovery_or10", 1.5, 10.0, 0, 0}};
  for (int s : {1, 2})
    for (const auto& c : cells) {
      const auto& cs = cell(r, s, c.br, c.odds);
      const bool q2ok = cs.q2_top1_hit >= 0.9 - 0.05;
      std::string line = where(s, c.br, c.odds) + " Q2 top-1 = " + f3(cs.q2_top1_hit) + " >= 0.85";
      bool doc = false;
      if (!q2ok) {
        const double orc = oracle(r, c.grid, s, c.ri, c.oi, Case::observed, false).q2_top1;
        line += " (marginal oracle " + f3(orc) + ")";
        doc = orc < 0.9 && cs.q2_top1_hit >= orc - 0.1;
      }
      o.check(q2ok, line, doc);
      if (c.br >= 1.5) {
        const bool ovok = cs.overlap_recovery >= 0.9 - 0.05;
        line = where(s, c.br, c.odds) + " overlap recovery = " + f3(cs.overlap_recovery) + " >= 0.85";
        doc = false;
        if (!ovok) {
          const double ideal = oracle(r, c.grid, s, c.ri, c.oi, Case::observed, false).overlap;
          const double feas = oracle(r, c.grid, s, c.ri, c.oi, Case::observed, true).overlap;
          line += " (marginal oracle " + f3(ideal) + " with true nuisances, " + f3(feas) + " with fitted ones)";
          doc = feas < 0.9 && cs.overlap_recovery >= feas - 0.1;
        }
        o.check(ovok, line, doc);
      }
    }
  return o;
}

Outcome criterion5(const Runs& r) {
  Outcome o;
  const auto& c = cell(r, 2, 2.0, 10.0, Case::unobserved);
  const auto it = c.profiles.find("X12");
  const harness::VariableProfile p = it == c.profiles.end() ? harness::VariableProfile{} : it->second;
  o.check(p.q3_top5 >= 0.6, "X12 in Q3 top 5: " + f3(p.q3_top5) + " >= 0.6");
  o.check(p.q2_top5 >= 0.7, "X12 in Q2 top 5: " + f3(p.q2_top5) + " >= 0.7");
  o.check(p.overlap >= 0.5, "X12 in the overlap: " + f3(p.overlap) + " >= 0.5");
  return o;
}

Outcome criterion6(const Runs& r) {
  Outcome o;
  const auto& c = cell(r, 1, 2.0, 10.0, Case::unobserved);
  const auto it = c.profiles.find("Region");
  const double v = it == c.profiles.end() ? 0.0 : it->second.q3_top1;
  std::string line = "Region Q3 top-1 frequency = " + f3(v) + " in [0.1, 0.35]";
  bool doc = false;
  if (v < 0.1) {
    const double ideal = oracle(r, "unobserved", 1, 0, 0, Case::unobserved, false).region_q3_top1;
    const double feas = oracle(r, "unobserved", 1, 0, 0, Case::unobserved, true).region_q3_top1;
    line += " (marginal oracle " + f3(ideal) + " with true nuisances, " + f3(feas) + " with fitted ones)";
    doc = feas < 0.1 && v >= feas - 0.1;
  }
  o.check(v >= 0.1 && v <= 0.35, line, doc);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto d = datagen::generate_trial(datagen::default_schema(1), datagen::worked_example_spec(),
                                         datagen::region_spec_for(10.0), 500, datagen::running_example_seed);
  workflow::WorkflowConfig cfg;
  const auto obs = workflow::run_workflow(d, cfg);
  const auto un = workflow::run_workflow(datagen::mask_covariates(d, {"X11"}), cfg);
  o.check(obs.p_rv.p_value <= 0.05, "p_RV = " + g4(obs.p_rv.p_value) + " <= 0.05 (unobserved " +
                                        g4(un.p_rv.p_value) + "; p_RI " + g4(obs.p_ri.p_value) + ", p_TEH " +
                                        g4(obs.p_teh.p_value) + ")");
  o.check(obs.q2_ranking.rank_of("X11") == 1 && obs.q3_ranking.rank_of("X11") == 1,
          "observed: X11 ranks " + std::to_string(obs.q2_ranking.rank_of("X11")) + " in Q2 and " +
              std::to_string(obs.q3_ranking.rank_of("X11")) + " in Q3");
  o.check(obs.decision.terminal == workflow::Terminal::T2,
          std::string("observed terminal ") + workflow::to_string(obs.decision.terminal) + " == T2");
  const auto rr = un.q3_ranking.rank_of("Region");
  o.check(rr >= 1 && rr <= 3, "unobserved: Region Q3 rank " + std::to_string(rr) + " <= 3");
  o.check(std::find(un.overlap.begin(), un.overlap.end(), "X11") == un.overlap.end(),
          "unobserved overlap size " + std::to_string(un.overlap.size()) + " without X11");
  o.check(un.decision.terminal == workflow::Terminal::T4,
          std::string("unobserved terminal ") + workflow::to_string(un.decision.terminal) + " == T4");
  return o;
}

double exact_rank_sum_p(const std::vector<double>& y, const std::vector<int>& g) {
  const int n = static_cast<int>(y.size());
  std::vector<double> rk(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rk[i] += (y[j] < y[i]) + 0.5 * (y[j] == y[i]);
  const int k = std::accumulate(g.begin(), g.end(), 0);
  const double e = std::accumulate(rk.begin(), rk.end(), 0.0) * k / n;
  double obs = 0;
  for (int i = 0; i < n; ++i) obs += g[i] * rk[i];
  obs = std::fabs(obs - e);
  int hit = 0, all = 0;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (__builtin_popcount(m) != k) continue;
    double s = 0;
    for (int i = 0; i < n; ++i) s += (m >> i & 1) * rk[i];
    ++all;
    hit += std::fabs(s - e) >= obs - 1e-9;
  }
  return double(hit) / all;
}

Outcome criterion8() {
  Outcome o;
  {
    const std::vector<std::pair<std::vector<double>, std::vector<int>>> cases{
        {{1, 2, 3, 4, 5, 6}, {0, 0, 0, 1, 1, 1}},
        {{0.3, 2.1, -0.4, 1.7, 0.9, 2.8, 1.1, 0.2}, {0, 1, 0, 1, 0, 1, 1, 0}},
        {{5, 1, 4, 1, 3, 9, 2}, {1, 0, 1, 0, 0, 1, 0}}};
    for (const auto& [y, g] : cases) {
      Column resp{"y", ColumnKind::continuous, {}, y};
      Column grp{"g", ColumnKind::binary, {"0", "1"}, std::vector<double>(g.begin(), g.end())};
      FeatureTable x;
      x.add(grp);
      const double mc = indep::global_independence_test(resp, x, 100000, 11).p_value;
      const double ex = exact_rank_sum_p(y, g);
      o.check(std::fabs(mc - ex) <= 0.01, "permutation p (n=" + std::to_string(y.size()) + ") " + f3(mc) +
                                              " vs exhaustive " + f3(ex) + " within 0.01");
    }
  }
  {
    auto spec = datagen::scenario_spec(1);
    spec.s = 1.7;
    spec.beta1 = spec.beta1_star = 0.44;
    const auto d = datagen::generate_trial(datagen::default_schema(1), spec, datagen::region_spec_for(10.0), 500, 5);
    const auto est = workflow::fit_interaction_model(d);
    double worst = 0;
    for (int region = 0; region < 2; ++region) {
      double s[2] = {0, 0}, n[2] = {0, 0};
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d.region[i] == region) {
          s[d.treatment[i]] += d.outcome[i];
          n[d.treatment[i]] += 1;
        }
      worst = std::max(worst, std::fabs(est[region].estimate - (s[1] / n[1] - s[0] / n[0])));
    }
    char b[64];
    std::snprintf(b, sizeof b, "%.2e", worst);
    o.check(worst <= 1e-10, std::string("interaction-model effects vs cell means: max error ") + b + " <= 1e-10");
  }
  {
    auto spec = datagen::scenario_spec(1);
    spec.s = 1.7274;
    spec.beta0 = 0.0;
    spec.beta1 = 0.0;
    spec.beta1_star = 1.0;
    workflow::WorkflowConfig cfg;
    double total = 0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
      const std::uint64_t seed = derive_seed(77, {static_cast<std::uint64_t>(rep)});
      const auto d = datagen::generate_trial(datagen::default_schema(1), spec, datagen::region_spec_for(1.0), 500, seed);
      const auto pv =
          nuisance::fit_pseudo_outcomes(d, nuisance::make_plan(d.treatment, cfg.k_folds, seed), cfg.learner);
      total += stats::mean(pv.phi);
    }
    o.check(std::fabs(total / reps) <= 0.1, "zero-effect mean(phi) over 200 reps = " + f3(total / reps) + " within 0.1");
  }
  {
    double worst = 0;
    for (double odds : {1.0, 1.5, 2.0, 5.0, 10.0}) {
      const double a1 = std::log(odds);
      auto f = [&](double a0) {
        auto g = [&](double x) { return 1.0 / (1.0 + std::exp(-(a0 + a1 * x))); };
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 10, 1e-14) - 0.2;
      };
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t it = 200;
      const auto root = boost::math::tools::toms748_solve(f, -20.0, 20.0, tol, it);
      worst = std::max(worst, std::fabs(datagen::region_spec_for(odds, 0.2).alpha0 - 0.5 * (root.first + root.second)));
    }
    char b[64];
    std::snprintf(b, sizeof b, "%.2e", worst);
    o.check(worst <= 1e-4, std::string("alpha0 vs quadrature oracle: max error ") + b + " <= 1e-4");
  }
  {
    Rng r(31);
    std::vector<double> x(500), y(500);
    for (int i = 0; i < 500; ++i) {
      x[i] = r.uniform();
      y[i] = 0.5 + 1.5 * x[i] + 0.05 * r.normal();
    }
    const auto c = smooth::smooth_phi(y, x, 100);
    double worst = 0;
    for (const auto& p : c.points) worst = std::max(worst, std::fabs(p.fit - (0.5 + 1.5 * p.x)));
    o.check(worst <= 0.05, "spline vs known linear function: max error " + f3(worst) + " <= 0.05");
  }
  return o;
}

// Criterion 9: every subcommand run twice from the same argv, in separate
// directories and with different worker counts.

int sh(const fs::path& dir, const std::string& env, const std::vector<std::string>& args) {
  std::string cmd = "cd '" + dir.string() + "' && " + env + " '" RHET_CLI "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " > run.log 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::vector<std::string> manifest_argv(const fs::path& manifest) {
  const auto j = io::Json::parse(io::read_file(manifest.string()));
  std::vector<std::string> a = j.at("argv").get<std::vector<std::string>>();
  a.erase(a.begin());
  return a;
}

// Manifests differ only in wall-clock duration and the recorded worker count.
std::string normalized_manifest(const fs::path& p) {
  auto j = io::Json::parse(io::read_file(p.string()));
  j.erase("duration_seconds");
  j.erase("workers");
  return j.dump();
}

Outcome criterion9(const fs::path& dir) {
  Outcome o;
  const fs::path a = dir / "det_a", b = dir / "det_b";
  for (const auto& d : {a, b}) {
    fs::remove_all(d);
    fs::create_directories(d);
  }
  const std::vector<std::pair<std::vector<std::string>, std::string>> steps{
      {{"generate", "--scenario", "1", "--n", "500", "--or", "10", "--seed", "7", "--out-dir", "gen"},
       "gen/data.manifest.json"},
      {{"generate", "--example", "--out-dir", "ex"}, "ex/data.manifest.json"},
      {{"analyze", "ex/data.csv", "--schema", "ex/data.schema.json", "--out", "obs.json"}, "obs.manifest.json"},
      {{"analyze", "ex/data.csv", "--mask", "X11", "--out", "unobs.json"}, "unobs.manifest.json"},
      {{"simulate", "--grid", "default", "--replicates", "3", "--seed", "1", "--beta-ratios", "2", "--odds-ratios",
        "10", "--n-perm", "999", "--quiet", "--out-dir", "sim"},
       "sim/manifest.json"},
      {{"report", "--summary-dir", "sim", "--report", "obs.json", "--format", "both", "--out-dir", "fig"},
       "fig/manifest.json"},
      {{"calibrate", "--power-reps", "500", "--out", "cal.json"}, "cal.manifest.json"},
  };
  bool all_ran = true;
  for (const auto& [args, man] : steps) {
    const int ea = sh(a, "RHET_WORKERS=1", args);
    int eb = -1;
    if (ea == 0) eb = sh(b, "RHET_WORKERS=3", manifest_argv(a / man));
    if (ea != 0 || eb != 0) {
      o.check(false, args[0] + " exited " + std::to_string(ea) + "/" + std::to_string(eb));
      all_ran = false;
    }
  }
  if (!all_ran) return o;
  std::size_t files = 0, manifests = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    const auto rel = fs::relative(e.path(), a);
    const auto other = b / rel;
    if (!fs::exists(other)) {
      o.check(false, rel.string() + " missing from the second run");
      continue;
    }
    const std::string name = e.path().filename().string();
    if (name.size() >= 13 && name.compare(name.size() - 13, 13, "manifest.json") == 0) {
      ++manifests;
      if (normalized_manifest(e.path()) != normalized_manifest(other)) o.check(false, rel.string() + " differs");
    } else {
      ++files;
      if (io::read_file(e.path().string()) != io::read_file(other.string())) o.check(false, rel.string() + " differs");
    }
  }
  o.check(o.pass, std::to_string(files) + " outputs byte-identical and " + std::to_string(manifests) +
                      " manifests equal up to duration/workers (1 vs 3 workers, second run from the manifest argv)");
  return o;
}

}  // namespace

int main() {
  const int reps = env_int("RHET_ACCEPT_REPS", 200);
  fs::path dir;
  bool resume = false;
  if (const char* d = std::getenv("RHET_ACCEPT_DIR"); d && *d) {
    dir = d;
    resume = true;
  } else {
    dir = fs::temp_directory_path() / "rhet_acceptance";
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  std::printf("acceptance: R=%d, workers=%d, results in %s\n", reps, harness::resolve_workers(0), dir.c_str());
  std::fflush(stdout);

  std::vector<std::pair<int, Outcome>> results;
  auto add = [&](int id, const std::string& name, Outcome o) {
    print(id, name, o);
    results.emplace_back(id, std::move(o));
  };
  try {
    // Cheap criteria first so their lines appear early.
    add(7, "running example", criterion7());
    add(8, "component oracles", criterion8());
    add(9, "determinism", criterion9(dir));
    const auto runs = run_grids(dir, reps, resume);
    if (runs.summary.n_failed) std::printf("warning: %zu failed replicate records\n", runs.summary.n_failed);
    add(1, "null calibration", criterion1(runs));
    add(2, "selective sensitivity", criterion2(runs));
    add(3, "Q1 sensitivity along the diagonal", criterion3(runs));
    add(4, "observed-case recovery", criterion4(runs));
    add(5, "proxy recovery", criterion5(runs));
    add(6, "surrogate Region signal", criterion6(runs));
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }

  std::sort(results.begin(), results.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::printf("\nsummary\n");
  int undocumented = 0;
  for (const auto& [id, o] : results) {
    std::printf("  criterion %d: %s\n", id, o.pass ? "PASS" : (o.documented() ? "FAIL (documented)" : "FAIL"));
    if (o.undocumented) ++undocumented;
  }
  return undocumented == 0 ? 0 : 1;
}
