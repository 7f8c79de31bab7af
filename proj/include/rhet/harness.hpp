#pragma once

// Factorial simulation over scenarios, interaction strengths, odds ratios and
// analysis cases, and the performance measures summarized from its records.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rhet/datagen.hpp"
#include "rhet/io.hpp"
#include "rhet/workflow.hpp"

namespace rhet::harness {

enum class Case { observed, unobserved };
const char* to_string(Case c);
Case case_from_string(const std::string& s);

struct GridConfig {
  std::vector<int> scenarios{1, 2};
  std::vector<double> beta_ratios{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> odds_ratios{1.0, 1.5, 2.0, 5.0, 10.0};
  std::vector<Case> cases{Case::observed, Case::unobserved};
  int replicates = 500;
  std::size_t n = 500;
  std::uint64_t master_seed = 1;
  /// 0: RHET_WORKERS, else the OpenMP default.
  int workers = 0;

  double prevalence_target = 0.2;
  double r2_target = 0.3;
  std::size_t n_calibration = 100000;
  int power_reps = 2000;
  double power_target = 0.8;
  double power_alpha = 0.05;
  std::uint64_t calibration_seed = 20240601;

  workflow::WorkflowConfig workflow;

  std::size_t size() const { return scenarios.size() * beta_ratios.size() * odds_ratios.size() * cases.size(); }
  void validate() const;
};

/// Flags and file values override these; "default" is the full grid.
GridConfig default_grid();
io::Json grid_to_json(const GridConfig& g);
GridConfig grid_from_json(const io::Json& j, GridConfig base = default_grid());

/// Design-time constants of one scenario.
struct Calibration {
  int scenario = 1;
  double s = 1.0;
  double beta1_star = 1.0;
  double achieved_power = 0.0;
};
Calibration calibrate_scenario(int scenario, const GridConfig& grid);

struct ReplicateRecord {
  int scenario = 1;
  std::size_t ratio_index = 0;
  std::size_t or_index = 0;
  double beta_ratio = 0.0;
  double odds_ratio = 1.0;
  Case analysis_case = Case::observed;
  int replicate = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double p_rv = 1.0, p_ri = 1.0, p_teh = 1.0;
  std::vector<std::string> q2_top5, q3_top5, overlap;
  std::string top1_q2, top1_q3;
  std::string terminal;
  std::size_t region1_n = 0;
};

io::Json record_to_json(const ReplicateRecord& r);
ReplicateRecord record_from_json(const io::Json& j);

/// hash(master_seed, scenario, ratio index, OR index, replicate).
std::uint64_t replicate_seed(std::uint64_t master, int scenario, std::size_t ratio_index, std::size_t or_index,
                             int replicate);

/// The dataset of one grid cell and replicate, shared by both cases.
datagen::TrialDataset replicate_dataset(const GridConfig& grid, const Calibration& cal, std::size_t ratio_index,
                                        std::size_t or_index, int replicate);

/// Workflow configuration used for one replicate (seed derived from the grid).
workflow::WorkflowConfig replicate_workflow_config(const GridConfig& grid, int scenario, std::size_t ratio_index,
                                                   std::size_t or_index, int replicate);

struct RunOptions {
  /// JSONL sink; empty keeps records in memory only.
  std::string results_path;
  /// Replays records already in results_path and runs only the rest.
  bool resume = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Records in grid order: scenario, ratio, OR, replicate, case. The file is
/// written in the same order whatever the worker count.
std::vector<ReplicateRecord> run_grid(const GridConfig& grid, const std::map<int, Calibration>& calibrations,
                                      const RunOptions& options = {});

int resolve_workers(int requested);

// Summary.

enum class Family { p_rv, p_ri, p_teh };
const char* to_string(Family f);

struct ConfigKey {
  int scenario;
  double beta_ratio;
  double odds_ratio;
  Case analysis_case;
  auto operator<=>(const ConfigKey&) const = default;
};

struct VariableProfile {
  double q2_top5 = 0.0, q3_top5 = 0.0, overlap = 0.0, q2_top1 = 0.0, q3_top1 = 0.0;
};

struct ConfigSummary {
  ConfigKey key;
  std::size_t n_ok = 0, n_failed = 0;
  std::map<Family, std::vector<double>> ecdf;  // sorted p-values
  std::map<Family, double> median_surprise;
  std::map<Family, double> ks_uniform;
  /// NaN where no truth-based target is defined.
  double q2_top1_hit = 0.0, q3_top1_hit = 0.0, overlap_recovery = 0.0;
  std::vector<std::string> q2_targets, q3_targets;
  std::map<std::string, VariableProfile> profiles;
};

struct MeasureSummary {
  std::vector<ConfigSummary> configs;
  std::size_t n_failed = 0;
  const ConfigSummary* find(const ConfigKey& key) const;
};

/// Targets per case: observed, X_pred; unobserved scenario 2, the proxies
/// {X12, X9} with Region added for Q3; unobserved scenario 1, none.
std::vector<std::string> q2_targets(int scenario, Case c);
std::vector<std::string> q3_targets(int scenario, Case c);

MeasureSummary summarize(const std::vector<ReplicateRecord>& records);

/// Kolmogorov-Smirnov distance of a sample from Uniform(0, 1).
double ks_uniform(std::vector<double> sample);
double median_surprise(const std::vector<double>& p);

std::string ecdf_csv(const MeasureSummary& s);
std::string surprise_csv(const MeasureSummary& s);
std::string hits_csv(const MeasureSummary& s);
std::string profiles_csv(const MeasureSummary& s);

}  // namespace rhet::harness
