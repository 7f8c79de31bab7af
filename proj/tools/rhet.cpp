// rhet: generate, analyze, simulate, report, calibrate.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "rhet/error.hpp"
#include "rhet/figures.hpp"
#include "rhet/harness.hpp"
#include "rhet/io.hpp"
#include "rhet/manifest.hpp"

namespace fs = std::filesystem;
using namespace rhet;

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  int workers = 0;
  std::vector<std::string> argv;
};

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void finish_manifest(manifest::RunManifest& m, const std::string& path, Clock::time_point t0) {
  m.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  io::write_file(path, m.to_json().dump(2) + "\n");
}

io::Json load_json(const std::string& path) {
  try {
    return io::parse_json(io::read_file(path), path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

// generate

struct GenerateArgs {
  int scenario = 1;
  std::size_t n = 500;
  double odds_ratio = 1.0;
  double beta_ratio = 1.0;
  double beta1 = -1.0;
  double s = -1.0;
  double beta1_star = -1.0;
  double prevalence = 0.2;
  double r2 = 0.3;
  std::uint64_t seed = 1;
  bool example = false;
  std::vector<std::string> mask;
  std::string out_dir = ".";
  std::string prefix = "data";
};

int cmd_generate(GenerateArgs a, const Common& c, const CLI::App& sub) {
  if (a.example && !sub.count("--seed")) a.seed = datagen::running_example_seed;
  const auto t0 = Clock::now();
  if (a.scenario != 1 && a.scenario != 2) throw ConfigError("--scenario must be 1 or 2");
  if (a.example && a.scenario != 1) throw ConfigError("--example is a scenario-1 dataset");
  datagen::ScenarioSpec spec = a.example ? datagen::worked_example_spec() : datagen::scenario_spec(a.scenario);
  harness::GridConfig g;
  g.n = a.n;
  g.r2_target = a.r2;
  double achieved = std::nan("");
  if (!a.example) {
    if (a.s > 0 && a.beta1_star > 0) {
      spec.s = a.s;
      spec.beta1_star = a.beta1_star;
    } else {
      const auto cal = harness::calibrate_scenario(a.scenario, g);
      spec.s = a.s > 0 ? a.s : cal.s;
      spec.beta1_star = a.beta1_star > 0 ? a.beta1_star : cal.beta1_star;
      achieved = cal.achieved_power;
    }
    spec.beta1 = a.beta1 >= 0 ? a.beta1 : a.beta_ratio * spec.beta1_star;
  } else if (a.beta1 >= 0) {
    spec.beta1 = a.beta1;
  }
  spec.validate();
  const auto rs = datagen::region_spec_for(a.odds_ratio, a.prevalence);
  auto d = datagen::generate_trial(datagen::default_schema(a.scenario), spec, rs, a.n, a.seed);
  if (!a.mask.empty()) d = datagen::mask_covariates(std::move(d), a.mask);

  const std::string csv = join_path(a.out_dir, a.prefix + ".csv");
  const std::string schema = join_path(a.out_dir, a.prefix + ".schema.json");
  io::write_dataset(d, csv, schema);

  manifest::RunManifest m;
  m.subcommand = "generate";
  m.argv = c.argv;
  m.master_seed = a.seed;
  m.workers = c.workers;
  m.config = {{"scenario", a.scenario},
              {"example", a.example},
              {"n", a.n},
              {"odds_ratio", a.odds_ratio},
              {"prevalence_target", a.prevalence},
              {"alpha0", rs.alpha0},
              {"alpha1", rs.alpha1},
              {"s", spec.s},
              {"beta0", spec.beta0},
              {"beta1", spec.beta1},
              {"beta1_star", spec.beta1_star},
              {"r2_target", a.r2},
              {"calibrated_power", std::isfinite(achieved) ? io::Json(achieved) : io::Json(nullptr)},
              {"prognostic", spec.prognostic_description()},
              {"predictive", spec.predictive_description()},
              {"analysis_mask", d.analysis_mask},
              {"seed", a.seed}};
  m.add_output(csv);
  m.add_output(schema);
  finish_manifest(m, join_path(a.out_dir, a.prefix + ".manifest.json"), t0);
  std::printf("wrote %s and %s\n", csv.c_str(), schema.c_str());
  return 0;
}

// analyze

struct AnalyzeArgs {
  std::string data;
  std::string schema;
  std::vector<std::string> mask;
  std::string config;
  std::uint64_t seed = 1;
  int n_perm = indep::default_permutations;
  int n_trees = 500;
  std::string out = "report.json";
  std::string figures;
};

int cmd_analyze(const AnalyzeArgs& a, const Common& c, const CLI::App& sub) {
  const auto t0 = Clock::now();
  std::string schema = a.schema;
  if (schema.empty()) {
    fs::path p(a.data);
    schema = (p.parent_path() / (p.stem().string() + ".schema.json")).string();
  }
  workflow::WorkflowConfig cfg;
  if (!a.config.empty()) cfg = io::config_from_json(load_json(a.config), cfg);
  if (sub.count("--seed")) cfg.seed = a.seed;
  if (sub.count("--n-perm")) cfg.n_perm = a.n_perm;
  if (sub.count("--n-trees")) {
    cfg.forest.n_trees = a.n_trees;
    cfg.learner.forest.n_trees = a.n_trees;
  }
  auto d = io::read_dataset(a.data, schema);
  if (!a.mask.empty()) d = datagen::mask_covariates(std::move(d), a.mask);
  const auto rep = workflow::run_workflow(d, cfg);
  io::write_file(a.out, io::report_to_json(rep).dump(2) + "\n");

  manifest::RunManifest m;
  m.subcommand = "analyze";
  m.argv = c.argv;
  m.master_seed = cfg.seed;
  m.workers = c.workers;
  m.config = io::config_to_json(cfg);
  m.config["analysis_mask"] = d.analysis_mask;
  m.add_input(a.data);
  m.add_input(schema);
  if (!a.config.empty()) m.add_input(a.config);
  m.add_output(a.out);
  if (!a.figures.empty()) {
    fs::create_directories(a.figures);
    for (const auto& [name, body] : figures::report_figures(rep)) {
      io::write_file(join_path(a.figures, name), body);
      m.add_output(join_path(a.figures, name));
    }
  }
  fs::path mp(a.out);
  finish_manifest(m, (mp.parent_path() / (mp.stem().string() + ".manifest.json")).string(), t0);
  std::printf("p_RV=%.4g p_RI=%.4g p_TEH=%.4g overlap=%zu terminal=%s\n", rep.p_rv.p_value, rep.p_ri.p_value,
              rep.p_teh.p_value, rep.overlap.size(), workflow::to_string(rep.decision.terminal));
  return 0;
}

// simulate

struct SimulateArgs {
  std::string grid = "default";
  int replicates = 0;
  std::uint64_t seed = 1;
  std::vector<int> scenarios;
  std::vector<double> beta_ratios, odds_ratios;
  std::vector<std::string> cases;
  int n_perm = 0;
  int n_trees = 0;
  std::string out_dir = "sim";
  bool resume = false;
  bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, const CLI::App& sub) {
  const auto t0 = Clock::now();
  harness::GridConfig g = harness::default_grid();
  std::vector<std::string> inputs;
  if (a.grid != "default") {
    g = harness::grid_from_json(load_json(a.grid), g);
    inputs.push_back(a.grid);
  }
  if (sub.count("--replicates")) g.replicates = a.replicates;
  if (sub.count("--seed")) g.master_seed = a.seed;
  if (sub.count("--scenarios")) g.scenarios = a.scenarios;
  if (sub.count("--beta-ratios")) g.beta_ratios = a.beta_ratios;
  if (sub.count("--odds-ratios")) g.odds_ratios = a.odds_ratios;
  if (sub.count("--cases")) {
    g.cases.clear();
    for (const auto& s : a.cases) g.cases.push_back(harness::case_from_string(s));
  }
  if (sub.count("--n-perm")) g.workflow.n_perm = a.n_perm;
  if (sub.count("--n-trees")) {
    g.workflow.forest.n_trees = a.n_trees;
    g.workflow.learner.forest.n_trees = a.n_trees;
  }
  g.workers = c.workers;
  g.validate();

  std::map<int, harness::Calibration> cals;
  io::Json cj = io::Json::array();
  for (int s : g.scenarios) {
    cals[s] = harness::calibrate_scenario(s, g);
    cj.push_back({{"scenario", s}, {"s", cals[s].s}, {"beta1_star", cals[s].beta1_star},
                  {"achieved_power", cals[s].achieved_power}});
  }
  fs::create_directories(a.out_dir);
  const std::string results = join_path(a.out_dir, "results.jsonl");
  harness::RunOptions opt;
  opt.results_path = results;
  opt.resume = a.resume;
  if (!a.quiet)
    opt.progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu / %zu replicate tasks", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  const auto records = harness::run_grid(g, cals, opt);
  const auto summary = harness::summarize(records);

  manifest::RunManifest m;
  m.subcommand = "simulate";
  m.argv = c.argv;
  m.master_seed = g.master_seed;
  m.workers = harness::resolve_workers(g.workers);
  m.config = harness::grid_to_json(g);
  m.config["calibration"] = cj;
  for (const auto& in : inputs) m.add_input(in);
  const std::string cal_path = join_path(a.out_dir, "calibration.json");
  io::write_file(cal_path, cj.dump(2) + "\n");
  const std::pair<const char*, std::string> files[] = {{"ecdf.csv", harness::ecdf_csv(summary)},
                                                       {"surprise.csv", harness::surprise_csv(summary)},
                                                       {"hits.csv", harness::hits_csv(summary)},
                                                       {"profiles.csv", harness::profiles_csv(summary)}};
  m.add_output(results);
  m.add_output(cal_path);
  for (const auto& [name, text] : files) {
    io::write_file(join_path(a.out_dir, name), text);
    m.add_output(join_path(a.out_dir, name));
  }
  finish_manifest(m, join_path(a.out_dir, "manifest.json"), t0);
  std::printf("%zu records (%zu failed) in %s\n", records.size(), summary.n_failed, a.out_dir.c_str());
  return 0;
}

// report

struct ReportArgs {
  std::string summary_dir;
  std::string report;
  std::string out_dir = "figures";
  std::string format = "svg";
};

std::string ranking_csv(const forest::ImportanceRanking& r) {
  std::string out = "rank,feature,vi\n";
  for (std::size_t k = 0; k < r.order.size(); ++k)
    out += std::to_string(k + 1) + "," + r.names[r.order[k]] + "," + io::format_double(r.scores[r.order[k]]) + "\n";
  return out;
}

std::string display_csv(const workflow::Q4Display& d) {
  std::string out;
  if (d.kind == ColumnKind::continuous) {
    out = "x,fit,lower,upper\n";
    for (const auto& p : d.curve.points)
      out += io::format_double(p.x) + "," + io::format_double(p.fit) + "," + io::format_double(p.lower) + "," +
             io::format_double(p.upper) + "\n";
  } else {
    out = "level,n,mean,lower,upper\n";
    for (const auto& l : d.levels)
      out += l.level + "," + std::to_string(l.n) + "," + io::format_double(l.mean) + "," + io::format_double(l.lower) +
             "," + io::format_double(l.upper) + "\n";
  }
  return out;
}

int cmd_report(const ReportArgs& a, const Common& c) {
  const auto t0 = Clock::now();
  if (a.summary_dir.empty() && a.report.empty()) throw ConfigError("report needs --summary-dir or --report");
  const bool svg = a.format == "svg" || a.format == "both";
  const bool csv = a.format == "csv" || a.format == "both";
  manifest::RunManifest m;
  m.subcommand = "report";
  m.argv = c.argv;
  m.workers = c.workers;
  m.config = {{"format", a.format}, {"summary_dir", a.summary_dir}, {"report", a.report}};
  std::vector<std::pair<std::string, std::string>> out;
  if (!a.report.empty()) {
    m.add_input(a.report);
    const auto rep = io::report_from_json(io::parse_json(io::read_file(a.report), a.report));
    if (svg)
      for (auto& f : figures::report_figures(rep)) out.push_back(std::move(f));
    if (csv) {
      out.emplace_back("vi_q2.csv", ranking_csv(rep.q2_ranking));
      out.emplace_back("vi_q3.csv", ranking_csv(rep.q3_ranking));
      for (const auto& d : rep.q4_displays) {
        out.emplace_back("q4_" + d.covariate + ".csv", display_csv(d));
        std::string arms = "arm,x,mean\n";
        for (const auto& c : d.arm_curves)
          for (std::size_t i = 0; i < c.x.size(); ++i)
            arms += std::to_string(c.arm) + "," + io::format_double(c.x[i]) + "," + io::format_double(c.mean[i]) + "\n";
        out.emplace_back("arms_" + d.covariate + ".csv", arms);
      }
      std::string est = "region,estimate,se,lower,upper,n\n";
      for (const auto& e : rep.region_estimates)
        est += std::to_string(e.region) + "," + io::format_double(e.estimate) + "," + io::format_double(e.se) + "," +
               io::format_double(e.lower) + "," + io::format_double(e.upper) + "," + std::to_string(e.n) + "\n";
      out.emplace_back("region_estimates.csv", est);
    }
  }
  if (!a.summary_dir.empty()) {
    std::string text[4];
    const char* names[4] = {"ecdf.csv", "surprise.csv", "hits.csv", "profiles.csv"};
    for (int k = 0; k < 4; ++k) {
      const std::string p = join_path(a.summary_dir, names[k]);
      text[k] = io::read_file(p);
      m.add_input(p);
    }
    const auto s = figures::summary_from_csv(text[0], text[1], text[2], text[3]);
    if (svg)
      for (auto& f : figures::summary_figures(s)) out.push_back(std::move(f));
    if (csv) {
      out.emplace_back("ecdf.csv", harness::ecdf_csv(s));
      out.emplace_back("surprise.csv", harness::surprise_csv(s));
      out.emplace_back("hits.csv", harness::hits_csv(s));
      out.emplace_back("profiles.csv", harness::profiles_csv(s));
    }
  }
  fs::create_directories(a.out_dir);
  for (const auto& [name, body] : out) {
    const std::string p = join_path(a.out_dir, name);
    io::write_file(p, body);
    m.add_output(p);
  }
  finish_manifest(m, join_path(a.out_dir, "manifest.json"), t0);
  std::printf("wrote %zu files to %s\n", out.size(), a.out_dir.c_str());
  return 0;
}

// calibrate

struct CalibrateArgs {
  std::vector<int> scenarios{1, 2};
  std::vector<double> odds_ratios{1.0, 1.5, 2.0, 5.0, 10.0};
  double r2 = 0.3;
  std::size_t n = 500;
  std::size_t n_cal = 100000;
  int power_reps = 2000;
  double prevalence = 0.2;
  std::uint64_t seed = 20240601;
  std::string out = "calibration.json";
};

int cmd_calibrate(const CalibrateArgs& a, const Common& c) {
  const auto t0 = Clock::now();
  harness::GridConfig g;
  g.r2_target = a.r2;
  g.n = a.n;
  g.n_calibration = a.n_cal;
  g.power_reps = a.power_reps;
  g.prevalence_target = a.prevalence;
  g.calibration_seed = a.seed;
  io::Json j;
  io::Json sc = io::Json::array();
  for (int s : a.scenarios) {
    if (s != 1 && s != 2) throw ConfigError("--scenarios takes 1 and/or 2");
    const auto cal = harness::calibrate_scenario(s, g);
    sc.push_back({{"scenario", s}, {"s", cal.s}, {"beta1_star", cal.beta1_star}, {"achieved_power", cal.achieved_power}});
    std::printf("scenario %d: s=%.4f beta1*=%.4f power=%.3f\n", s, cal.s, cal.beta1_star, cal.achieved_power);
  }
  io::Json rg = io::Json::array();
  for (double o : a.odds_ratios) {
    const auto rs = datagen::region_spec_for(o, a.prevalence);
    rg.push_back({{"odds_ratio", o}, {"alpha0", rs.alpha0}, {"alpha1", rs.alpha1}});
  }
  j["scenarios"] = sc;
  j["region"] = rg;
  j["settings"] = {{"r2_target", a.r2}, {"n", a.n}, {"n_calibration", a.n_cal}, {"power_reps", a.power_reps},
                   {"prevalence_target", a.prevalence}, {"seed", a.seed}};
  io::write_file(a.out, j.dump(2) + "\n");
  manifest::RunManifest m;
  m.subcommand = "calibrate";
  m.argv = c.argv;
  m.master_seed = a.seed;
  m.workers = c.workers;
  m.config = j["settings"];
  m.add_output(a.out);
  fs::path p(a.out);
  finish_manifest(m, (p.parent_path() / (p.stem().string() + ".manifest.json")).string(), t0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rhet: regional treatment-effect heterogeneity workflow and simulation"};
  app.require_subcommand(1);
  Common common;
  for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: RHET_WORKERS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic trial dataset (CSV + schema JSON)");
  gen->add_option("--scenario", ga.scenario, "Outcome scenario (1 or 2)");
  gen->add_option("--n", ga.n, "Patients");
  gen->add_option("--or", ga.odds_ratio, "Odds ratio linking X_pred to Region");
  gen->add_option("--beta-ratio", ga.beta_ratio, "beta1 as a multiple of the calibrated beta1*");
  gen->add_option("--beta1", ga.beta1, "Interaction magnitude (overrides --beta-ratio)");
  gen->add_option("--s", ga.s, "Prognostic scale (skips calibration with --beta1-star)");
  gen->add_option("--beta1-star", ga.beta1_star, "Reference interaction magnitude");
  gen->add_option("--prevalence", ga.prevalence, "Target Pr(Region = 1)");
  gen->add_option("--r2", ga.r2, "Control-arm R^2 target for the scale calibration");
  gen->add_option("--seed", ga.seed, "Seed");
  gen->add_flag("--example", ga.example, "Worked single-dataset example constants (s = 2.32, beta1 = 0.767); seed defaults to the running example");
  gen->add_option("--mask", ga.mask, "Covariates to record in the analysis mask (comma-separated)")->delimiter(',');
  gen->add_option("--out-dir", ga.out_dir, "Output directory");
  gen->add_option("--prefix", ga.prefix, "Output file prefix");

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "Run the four-question workflow on one dataset");
  ana->add_option("data", aa.data, "Dataset CSV")->required();
  ana->add_option("--schema", aa.schema, "Schema JSON (default: <data>.schema.json)");
  ana->add_option("--mask", aa.mask, "Covariates to hide from the analysis (comma-separated)")->delimiter(',');
  ana->add_option("--figures", aa.figures, "Also write the report figures (SVG) to this directory");
  ana->add_option("--config", aa.config, "Workflow configuration JSON");
  ana->add_option("--seed", aa.seed, "Workflow seed");
  ana->add_option("--n-perm", aa.n_perm, "Permutations per test");
  ana->add_option("--n-trees", aa.n_trees, "Trees per forest");
  ana->add_option("--out", aa.out, "WorkflowReport JSON path");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run the factorial simulation grid");
  sim->add_option("--grid", sa.grid, "'default' or a grid JSON file");
  sim->add_option("--replicates", sa.replicates, "Replicates per configuration");
  sim->add_option("--seed", sa.seed, "Master seed");
  sim->add_option("--scenarios", sa.scenarios, "Scenarios")->delimiter(',');
  sim->add_option("--beta-ratios", sa.beta_ratios, "beta1 / beta1* values")->delimiter(',');
  sim->add_option("--odds-ratios", sa.odds_ratios, "Odds ratios")->delimiter(',');
  sim->add_option("--cases", sa.cases, "observed and/or unobserved")->delimiter(',');
  sim->add_option("--n-perm", sa.n_perm, "Permutations per test");
  sim->add_option("--n-trees", sa.n_trees, "Trees per forest");
  sim->add_option("--out-dir", sa.out_dir, "Output directory");
  sim->add_flag("--resume", sa.resume, "Continue from an existing results.jsonl");
  sim->add_flag("--quiet", sa.quiet, "No progress output");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "Render figures and tables");
  rep->add_option("--summary-dir", ra.summary_dir, "Directory holding ecdf/surprise/hits/profiles CSVs");
  rep->add_option("--report", ra.report, "WorkflowReport JSON");
  rep->add_option("--out-dir", ra.out_dir, "Output directory");
  rep->add_option("--format", ra.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Compute s, beta1* and the region intercepts");
  cal->add_option("--scenarios", ca.scenarios, "Scenarios")->delimiter(',');
  cal->add_option("--odds-ratios", ca.odds_ratios, "Odds ratios")->delimiter(',');
  cal->add_option("--r2", ca.r2, "Control-arm R^2 target");
  cal->add_option("--n", ca.n, "Trial size for the power calibration");
  cal->add_option("--n-cal", ca.n_cal, "Rows for the scale calibration");
  cal->add_option("--power-reps", ca.power_reps, "Monte-Carlo replicates for the power calibration");
  cal->add_option("--prevalence", ca.prevalence, "Target Pr(Region = 1)");
  cal->add_option("--seed", ca.seed, "Calibration seed");
  cal->add_option("--out", ca.out, "Output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    common.workers = harness::resolve_workers(workers);
    omp_set_num_threads(common.workers);
    if (gen->parsed()) return cmd_generate(ga, common, *gen);
    if (ana->parsed()) return cmd_analyze(aa, common, *ana);
    if (sim->parsed()) return cmd_simulate(sa, common, *sim);
    if (rep->parsed()) return cmd_report(ra, common);
    if (cal->parsed()) return cmd_calibrate(ca, common);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
