#include <algorithm>
#include <cstdio>

#include "rhet/error.hpp"
#include "rhet/workflow.hpp"

namespace rhet::workflow {

const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::T1: return "T1";
    case Terminal::T2: return "T2";
    case Terminal::T3: return "T3";
    case Terminal::T4: return "T4";
    case Terminal::T5: return "T5";
  }
  return "?";
}

Terminal terminal_from_string(const std::string& s) {
  if (s == "T1") return Terminal::T1;
  if (s == "T2") return Terminal::T2;
  if (s == "T3") return Terminal::T3;
  if (s == "T4") return Terminal::T4;
  if (s == "T5") return Terminal::T5;
  throw DataError("unknown terminal '" + s + "'");
}

std::vector<std::string> overlap_set(const forest::ImportanceRanking& q2, const forest::ImportanceRanking& q3,
                                     std::size_t k) {
  struct Entry {
    std::string name;
    std::size_t r2, r3, index;
  };
  std::vector<Entry> both;
  const auto top3 = q3.top(k);
  for (std::size_t r = 0; r < std::min(k, q2.order.size()); ++r) {
    const std::size_t j = q2.order[r];
    const std::string& name = q2.names[j];
    if (std::find(top3.begin(), top3.end(), name) == top3.end()) continue;
    both.push_back({name, r + 1, q3.rank_of(name), j});
  }
  std::sort(both.begin(), both.end(), [](const Entry& a, const Entry& b) {
    if (a.r2 + a.r3 != b.r2 + b.r3) return a.r2 + a.r3 < b.r2 + b.r3;
    if (a.r3 != b.r3) return a.r3 < b.r3;
    return a.index < b.index;
  });
  std::vector<std::string> out;
  for (const auto& e : both) out.push_back(e.name);
  return out;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double lead_score(const forest::ImportanceRanking& r) {
  return r.order.empty() ? 0.0 : r.scores[r.order.front()];
}

}  // namespace

Decision decide_terminal(double p_rv, double p_ri, double p_teh, const std::vector<std::string>& overlap,
                         const forest::ImportanceRanking& q2, const forest::ImportanceRanking& q3,
                         std::size_t min_region_n, const Thresholds& th) {
  Decision d;
  const std::string evidence = "p_RV = " + fmt("%.4g", p_rv) + ", p_RI = " + fmt("%.4g", p_ri) +
                               ", p_TEH = " + fmt("%.4g", p_teh) + ". ";
  if (p_rv > th.no_evidence) {
    d.terminal = Terminal::T1;
    d.rationale = evidence + "No evidence of regional variability in the pseudo-outcome (p_RV above " +
                  fmt("%g", th.no_evidence) + "); document regional consistency.";
    return d;
  }

  bool supported = false, dominant = false, outranks_region = false;
  std::string leader;
  if (!overlap.empty()) {
    leader = overlap.front();
    const double s2 = q2.score_of(leader), s3 = q3.score_of(leader);
    const double l2 = lead_score(q2), l3 = lead_score(q3);
    supported = s2 > 0.0 && s3 > 0.0 && s2 >= th.support * l2 && s3 >= th.support * l3;
    if (overlap.size() == 1) {
      dominant = true;
    } else {
      const double n2 = q2.score_of(overlap[1]), n3 = q3.score_of(overlap[1]);
      dominant = s2 >= th.dominance * std::max(n2, 0.0) && s3 >= th.dominance * std::max(n3, 0.0);
    }
    const std::size_t region_rank = q3.rank_of("Region");
    outranks_region = region_rank == 0 || q3.rank_of(leader) < region_rank;
  }

  if (supported) {
    if (p_rv < th.strong && dominant && outranks_region) {
      d.terminal = Terminal::T2;
      d.rationale = evidence + "Strong regional variability with a dominant overlap candidate '" + leader +
                    "' that leads both rankings and outranks Region in Q3; attribute the regional "
                    "difference to this covariate. Dominance uses a heuristic VI-ratio rule (" +
                    fmt("%g", th.dominance) + "x).";
    } else {
      d.terminal = Terminal::T3;
      std::string why;
      if (!(p_rv < th.strong)) why = "regional evidence is only moderate";
      else if (!dominant) why = "the overlap is diffuse (no member dominates under the heuristic VI-ratio rule)";
      else why = "Region still outranks the leading candidate in Q3";
      d.rationale = evidence + "Overlap candidate '" + leader + "' explains part of the regional variability, but " +
                    why + "; report as a partial explanation.";
    }
    return d;
  }

  const std::string overlap_text = overlap.empty() ? "the Q2/Q3 overlap is empty"
                                                   : "the Q2/Q3 overlap carries no supported candidate";
  if (p_rv >= th.strong && min_region_n < th.small_region_n) {
    d.terminal = Terminal::T5;
    d.rationale = evidence + "Regional evidence is ambiguous, " + overlap_text +
                  ", and the smallest region has fewer than " + std::to_string(th.small_region_n) +
                  " patients; attribute the observed variation primarily to sampling variability.";
  } else {
    d.terminal = Terminal::T4;
    d.rationale = evidence + "Regional variability is present but " + overlap_text +
                  "; Region may act as a surrogate for unmeasured factors.";
  }
  return d;
}

}  // namespace rhet::workflow
