#pragma once

// Static figures of single-dataset reports and simulation summaries.

#include <string>
#include <vector>

#include "rhet/harness.hpp"
#include "rhet/workflow.hpp"

namespace rhet::figures {

enum class FigureKind { vi_bars, q4_display, ecdf_panel, surprise_heatmap, hit_curves, profile_dots };
const char* to_string(FigureKind k);
FigureKind figure_kind_from_string(const std::string& s);

inline const char* region_colour(int region) { return region == 0 ? "#d62728" : "#1f77b4"; }

struct FigureSpec {
  FigureKind kind = FigureKind::vi_bars;
  std::string title;
  double width = 640;
  double height = 420;
  // Report figures.
  std::string ranking = "q3";  // vi_bars: q2 or q3
  std::string covariate;       // q4_display
  std::size_t top_k = 10;
  // Summary figures.
  int scenario = 1;
  harness::Case analysis_case = harness::Case::observed;
  harness::Family family = harness::Family::p_rv;
  std::string measure = "q2_top1";  // hit_curves: q2_top1, q3_top1 or overlap
  std::string set = "q3_top5";      // profile_dots: q2_top5, q3_top5 or overlap
  double beta_ratio = 2.0;
  double odds_ratio = 10.0;
};

std::string render_vi_bars(const forest::ImportanceRanking& ranking, const std::string& title, std::size_t top_k = 10,
                           double width = 640, double height = 420);
std::string render_q4_display(const workflow::Q4Display& display, const std::string& title, double width = 640,
                              double height = 520);
/// Mean outcome per covariate bin (or level) in each arm.
std::string render_arm_curves(const workflow::Q4Display& display, const std::string& title, double width = 640,
                              double height = 400);

struct EcdfSeries {
  std::string label;
  std::vector<double> sorted_p;
};
std::string render_ecdf_panel(const std::vector<EcdfSeries>& series, const std::string& title, double width = 420,
                              double height = 420);

std::string render(const FigureSpec& spec, const workflow::WorkflowReport& report);
std::string render(const FigureSpec& spec, const harness::MeasureSummary& summary);

/// Rebuilds a summary from the exported ecdf, surprise, hits and profiles CSVs.
harness::MeasureSummary summary_from_csv(const std::string& ecdf, const std::string& surprise, const std::string& hits,
                                         const std::string& profiles);

/// Every figure a report or summary supports, as (file name, SVG) pairs.
std::vector<std::pair<std::string, std::string>> report_figures(const workflow::WorkflowReport& report);
std::vector<std::pair<std::string, std::string>> summary_figures(const harness::MeasureSummary& summary);

}  // namespace rhet::figures
