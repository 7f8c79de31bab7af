#include "rhet/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rhet/error.hpp"
#include "rhet/rng.hpp"

namespace rhet::harness {

const char* to_string(Case c) { return c == Case::observed ? "observed" : "unobserved"; }

Case case_from_string(const std::string& s) {
  if (s == "observed") return Case::observed;
  if (s == "unobserved") return Case::unobserved;
  throw ConfigError("case must be 'observed' or 'unobserved', got '" + s + "'");
}

void GridConfig::validate() const {
  if (scenarios.empty() || beta_ratios.empty() || odds_ratios.empty() || cases.empty())
    throw ConfigError("grid has an empty axis");
  for (int s : scenarios)
    if (s != 1 && s != 2) throw ConfigError("scenario must be 1 or 2");
  for (double b : beta_ratios)
    if (!(b >= 0.0)) throw ConfigError("beta ratios must be non-negative");
  for (double o : odds_ratios)
    if (!(o >= 1.0)) throw ConfigError("odds ratios must be at least 1");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (n < 20) throw ConfigError("n must be at least 20");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (!(prevalence_target > 0.0 && prevalence_target < 1.0)) throw ConfigError("prevalence target must be in (0, 1)");
  if (workflow.n_perm < 99) throw ConfigError("n_perm must be at least 99");
}

GridConfig default_grid() { return GridConfig{}; }

io::Json grid_to_json(const GridConfig& g) {
  io::Json j;
  j["scenarios"] = g.scenarios;
  j["beta_ratios"] = g.beta_ratios;
  j["odds_ratios"] = g.odds_ratios;
  std::vector<std::string> cases;
  for (Case c : g.cases) cases.emplace_back(to_string(c));
  j["cases"] = cases;
  j["replicates"] = g.replicates;
  j["n"] = g.n;
  j["master_seed"] = g.master_seed;
  j["prevalence_target"] = g.prevalence_target;
  j["r2_target"] = g.r2_target;
  j["n_calibration"] = g.n_calibration;
  j["power_reps"] = g.power_reps;
  j["power_target"] = g.power_target;
  j["power_alpha"] = g.power_alpha;
  j["calibration_seed"] = g.calibration_seed;
  j["workflow"] = io::config_to_json(g.workflow);
  return j;
}

GridConfig grid_from_json(const io::Json& j, GridConfig g) {
  if (!j.is_object()) throw ConfigError("grid configuration must be a JSON object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "scenarios") g.scenarios = v.get<std::vector<int>>();
      else if (k == "beta_ratios") g.beta_ratios = v.get<std::vector<double>>();
      else if (k == "odds_ratios") g.odds_ratios = v.get<std::vector<double>>();
      else if (k == "cases") {
        g.cases.clear();
        for (const auto& c : v) g.cases.push_back(case_from_string(c.get<std::string>()));
      } else if (k == "replicates") g.replicates = v.get<int>();
      else if (k == "n") g.n = v.get<std::size_t>();
      else if (k == "master_seed") g.master_seed = v.get<std::uint64_t>();
      else if (k == "workers") g.workers = v.get<int>();
      else if (k == "prevalence_target") g.prevalence_target = v.get<double>();
      else if (k == "r2_target") g.r2_target = v.get<double>();
      else if (k == "n_calibration") g.n_calibration = v.get<std::size_t>();
      else if (k == "power_reps") g.power_reps = v.get<int>();
      else if (k == "power_target") g.power_target = v.get<double>();
      else if (k == "power_alpha") g.power_alpha = v.get<double>();
      else if (k == "calibration_seed") g.calibration_seed = v.get<std::uint64_t>();
      else if (k == "workflow") g.workflow = io::config_from_json(v, g.workflow);
      else throw ConfigError("unknown grid key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid configuration: ") + e.what());
  }
  return g;
}

Calibration calibrate_scenario(int scenario, const GridConfig& g) {
  const auto schema = datagen::default_schema(scenario);
  auto spec = datagen::scenario_spec(scenario);
  Calibration c;
  c.scenario = scenario;
  c.s = datagen::calibrate_scale_s(spec, g.r2_target, schema, g.n_calibration,
                                   derive_seed(g.calibration_seed, {static_cast<std::uint64_t>(scenario), 1}));
  spec.s = c.s;
  const auto pc = datagen::calibrate_beta1_star(spec, schema, g.n, g.power_target, g.power_alpha, g.power_reps,
                                                derive_seed(g.calibration_seed, {static_cast<std::uint64_t>(scenario), 2}));
  c.beta1_star = pc.beta1_star;
  c.achieved_power = pc.achieved_power;
  return c;
}

io::Json record_to_json(const ReplicateRecord& r) {
  io::Json j;
  j["scenario"] = r.scenario;
  j["beta_ratio"] = r.beta_ratio;
  j["odds_ratio"] = r.odds_ratio;
  j["ratio_index"] = r.ratio_index;
  j["or_index"] = r.or_index;
  j["case"] = to_string(r.analysis_case);
  j["replicate"] = r.replicate;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["p_rv"] = r.p_rv;
  j["p_ri"] = r.p_ri;
  j["p_teh"] = r.p_teh;
  j["q2_top5"] = r.q2_top5;
  j["q3_top5"] = r.q3_top5;
  j["overlap"] = r.overlap;
  j["top1_q2"] = r.top1_q2;
  j["top1_q3"] = r.top1_q3;
  j["terminal"] = r.terminal;
  j["region1_n"] = r.region1_n;
  return j;
}

ReplicateRecord record_from_json(const io::Json& j) {
  ReplicateRecord r;
  try {
    r.scenario = j.at("scenario").get<int>();
    r.beta_ratio = j.at("beta_ratio").get<double>();
    r.odds_ratio = j.at("odds_ratio").get<double>();
    r.ratio_index = j.at("ratio_index").get<std::size_t>();
    r.or_index = j.at("or_index").get<std::size_t>();
    r.analysis_case = case_from_string(j.at("case").get<std::string>());
    r.replicate = j.at("replicate").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ok = j.at("ok").get<bool>();
    if (!r.ok) {
      r.error = j.value("error", std::string());
      return r;
    }
    r.p_rv = j.at("p_rv").get<double>();
    r.p_ri = j.at("p_ri").get<double>();
    r.p_teh = j.at("p_teh").get<double>();
    r.q2_top5 = j.at("q2_top5").get<std::vector<std::string>>();
    r.q3_top5 = j.at("q3_top5").get<std::vector<std::string>>();
    r.overlap = j.at("overlap").get<std::vector<std::string>>();
    r.top1_q2 = j.at("top1_q2").get<std::string>();
    r.top1_q3 = j.at("top1_q3").get<std::string>();
    r.terminal = j.at("terminal").get<std::string>();
    r.region1_n = j.at("region1_n").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("results record: ") + e.what());
  }
  return r;
}

std::uint64_t replicate_seed(std::uint64_t master, int scenario, std::size_t ratio_index, std::size_t or_index,
                             int replicate) {
  return derive_seed(master, {static_cast<std::uint64_t>(scenario), ratio_index, or_index,
                              static_cast<std::uint64_t>(replicate)});
}

datagen::TrialDataset replicate_dataset(const GridConfig& g, const Calibration& cal, std::size_t a, std::size_t o,
                                        int rep) {
  const int scenario = cal.scenario;
  const auto schema = datagen::default_schema(scenario);
  auto spec = datagen::scenario_spec(scenario);
  spec.s = cal.s;
  spec.beta1_star = cal.beta1_star;
  spec.beta1 = g.beta_ratios.at(a) * cal.beta1_star;
  const auto rs = datagen::region_spec_for(g.odds_ratios.at(o), g.prevalence_target);
  const std::uint64_t seed = replicate_seed(g.master_seed, scenario, a, o, rep);
  return datagen::generate_trial(schema, spec, rs, g.n, derive_seed(seed, {1}));
}

workflow::WorkflowConfig replicate_workflow_config(const GridConfig& g, int scenario, std::size_t a, std::size_t o,
                                                   int rep) {
  workflow::WorkflowConfig wc = g.workflow;
  wc.seed = derive_seed(replicate_seed(g.master_seed, scenario, a, o, rep), {2});
  wc.build_displays = false;
  return wc;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RHET_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw ConfigError("RHET_WORKERS must be a positive integer");
    return static_cast<int>(v);
  }
  return std::max(1, omp_get_max_threads());
}

namespace {

struct Task {
  int scenario;
  std::size_t a, o;
  int rep;
};

std::string record_key(int scenario, std::size_t a, std::size_t o, int rep, Case c) {
  return std::to_string(scenario) + "/" + std::to_string(a) + "/" + std::to_string(o) + "/" + std::to_string(rep) +
         "/" + to_string(c);
}

ReplicateRecord analyse(const GridConfig& g, const datagen::TrialDataset& base, const Task& t, Case c) {
  ReplicateRecord r;
  r.scenario = t.scenario;
  r.ratio_index = t.a;
  r.or_index = t.o;
  r.beta_ratio = g.beta_ratios[t.a];
  r.odds_ratio = g.odds_ratios[t.o];
  r.analysis_case = c;
  r.replicate = t.rep;
  r.seed = replicate_seed(g.master_seed, t.scenario, t.a, t.o, t.rep);
  const datagen::TrialDataset d =
      c == Case::observed ? base : datagen::mask_covariates(base, {datagen::scenario_spec(t.scenario).x_pred_name});
  const workflow::WorkflowConfig wc = replicate_workflow_config(g, t.scenario, t.a, t.o, t.rep);
  const auto rep = workflow::run_workflow(d, wc);
  const std::size_t k = wc.thresholds.top_k;
  r.p_rv = rep.p_rv.p_value;
  r.p_ri = rep.p_ri.p_value;
  r.p_teh = rep.p_teh.p_value;
  r.q2_top5 = rep.q2_ranking.top(k);
  r.q3_top5 = rep.q3_ranking.top(k);
  r.overlap = rep.overlap;
  r.top1_q2 = r.q2_top5.empty() ? "" : r.q2_top5.front();
  r.top1_q3 = r.q3_top5.empty() ? "" : r.q3_top5.front();
  r.terminal = workflow::to_string(rep.decision.terminal);
  r.region1_n = rep.region_n[1];
  return r;
}

std::vector<ReplicateRecord> run_task(const GridConfig& g, const std::map<int, Calibration>& cals, const Task& t) {
  std::vector<ReplicateRecord> out;
  const Calibration& cal = cals.at(t.scenario);
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      out.clear();
      const auto d = replicate_dataset(g, cal, t.a, t.o, t.rep);
      for (Case c : g.cases) out.push_back(analyse(g, d, t, c));
      return out;
    } catch (const std::exception& e) {
      if (attempt == 0) continue;
      out.clear();
      for (Case c : g.cases) {
        ReplicateRecord r;
        r.scenario = t.scenario;
        r.ratio_index = t.a;
        r.or_index = t.o;
        r.beta_ratio = g.beta_ratios[t.a];
        r.odds_ratio = g.odds_ratios[t.o];
        r.analysis_case = c;
        r.replicate = t.rep;
        r.seed = replicate_seed(g.master_seed, t.scenario, t.a, t.o, t.rep);
        r.ok = false;
        r.error = e.what();
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ReplicateRecord> run_grid(const GridConfig& g, const std::map<int, Calibration>& cals,
                                      const RunOptions& opt) {
  g.validate();
  for (int s : g.scenarios)
    if (!cals.count(s)) throw ConfigError("no calibration for scenario " + std::to_string(s));

  std::vector<Task> tasks;
  for (int s : g.scenarios)
    for (std::size_t a = 0; a < g.beta_ratios.size(); ++a)
      for (std::size_t o = 0; o < g.odds_ratios.size(); ++o)
        for (int r = 0; r < g.replicates; ++r) tasks.push_back({s, a, o, r});

  // Replay: keep the longest valid prefix of the results file.
  std::map<std::string, ReplicateRecord> done;
  std::string kept;
  if (opt.resume && !opt.results_path.empty() && std::filesystem::exists(opt.results_path)) {
    std::istringstream in(io::read_file(opt.results_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) break;
      ReplicateRecord r;
      try {
        r = record_from_json(io::Json::parse(line));
      } catch (const std::exception&) {
        break;
      }
      if (r.seed != replicate_seed(g.master_seed, r.scenario, r.ratio_index, r.or_index, r.replicate))
        throw ConfigError("results file '" + opt.results_path + "' was written by a different grid");
      done[record_key(r.scenario, r.ratio_index, r.or_index, r.replicate, r.analysis_case)] = r;
      kept += line + "\n";
    }
  }
  if (!opt.results_path.empty()) io::write_file(opt.results_path, kept);

  auto complete = [&](const Task& t) {
    for (Case c : g.cases)
      if (!done.count(record_key(t.scenario, t.a, t.o, t.rep, c))) return false;
    return true;
  };
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!complete(tasks[i])) todo.push_back(i);

  const int workers = resolve_workers(g.workers);
  const std::size_t chunk = std::max<std::size_t>(16, static_cast<std::size_t>(workers) * 4);
  std::ofstream sink;
  if (!opt.results_path.empty()) {
    sink.open(opt.results_path, std::ios::binary | std::ios::app);
    if (!sink) throw DataError("cannot append to '" + opt.results_path + "'");
  }
  const int saved_levels = omp_get_max_active_levels();
  omp_set_max_active_levels(1);
  std::size_t finished = tasks.size() - todo.size();
  for (std::size_t c0 = 0; c0 < todo.size(); c0 += chunk) {
    const std::size_t c1 = std::min(todo.size(), c0 + chunk);
    std::vector<std::vector<ReplicateRecord>> out(c1 - c0);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::size_t k = c0; k < c1; ++k) out[k - c0] = run_task(g, cals, tasks[todo[k]]);
    for (auto& recs : out)
      for (auto& r : recs) {
        if (sink.is_open()) sink << record_to_json(r).dump() << '\n';
        done[record_key(r.scenario, r.ratio_index, r.or_index, r.replicate, r.analysis_case)] = std::move(r);
      }
    if (sink.is_open()) sink.flush();
    finished += c1 - c0;
    if (opt.progress) opt.progress(finished, tasks.size());
  }
  omp_set_max_active_levels(saved_levels);

  std::vector<ReplicateRecord> records;
  records.reserve(tasks.size() * g.cases.size());
  for (const Task& t : tasks)
    for (Case c : g.cases) records.push_back(done.at(record_key(t.scenario, t.a, t.o, t.rep, c)));
  return records;
}

}  // namespace rhet::harness
