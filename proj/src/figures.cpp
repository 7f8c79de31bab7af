#include "rhet/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "rhet/error.hpp"
#include "rhet/svg.hpp"

namespace rhet::figures {

using svg::Document;
using svg::fmt;
using svg::Scale;

const char* to_string(FigureKind k) {
  switch (k) {
    case FigureKind::vi_bars: return "vi_bars";
    case FigureKind::q4_display: return "q4_display";
    case FigureKind::ecdf_panel: return "ecdf_panel";
    case FigureKind::surprise_heatmap: return "surprise_heatmap";
    case FigureKind::hit_curves: return "hit_curves";
    case FigureKind::profile_dots: return "profile_dots";
  }
  return "?";
}

FigureKind figure_kind_from_string(const std::string& s) {
  for (FigureKind k : {FigureKind::vi_bars, FigureKind::q4_display, FigureKind::ecdf_panel,
                       FigureKind::surprise_heatmap, FigureKind::hit_curves, FigureKind::profile_dots})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown figure kind '" + s + "'");
}

namespace {

constexpr const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                   "#e6ab02", "#a6761d", "#666666", "#1f78b4", "#b2df8a"};

std::string num2(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string num3(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Axis frame with ticks on the left and bottom.
void axes(Document& doc, const Scale& sx, const Scale& sy, const std::vector<double>& xt, const std::vector<double>& yt,
          const std::string& xlabel, const std::string& ylabel) {
  const double x0 = std::min(sx.r0, sx.r1), x1 = std::max(sx.r0, sx.r1);
  const double y0 = std::max(sy.r0, sy.r1), y1 = std::min(sy.r0, sy.r1);
  doc.line(x0, y0, x1, y0, "#000000");
  doc.line(x0, y0, x0, y1, "#000000");
  for (double t : xt) {
    doc.line(sx(t), y0, sx(t), y0 + 4, "#000000");
    doc.text(sx(t), y0 + 16, num3(t), 10, "middle");
  }
  for (double t : yt) {
    doc.line(x0 - 4, sy(t), x0, sy(t), "#000000");
    doc.text(x0 - 7, sy(t) + 3.5, num3(t), 10, "end");
  }
  if (!xlabel.empty()) doc.text(0.5 * (x0 + x1), y0 + 34, xlabel, 11, "middle");
  if (!ylabel.empty()) doc.text(x0 - 44, 0.5 * (y0 + y1), ylabel, 11, "middle", -90);
}

void title(Document& doc, double width, const std::string& t) {
  if (!t.empty()) doc.text(width / 2, 22, t, 13, "middle");
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

std::string key_label(const harness::ConfigKey& k) {
  return "beta/beta*=" + io::format_double(k.beta_ratio) + ", OR=" + io::format_double(k.odds_ratio);
}

}  // namespace

std::string render_vi_bars(const forest::ImportanceRanking& r, const std::string& t, std::size_t top_k, double width,
                           double height) {
  if (r.order.empty()) throw DataError("vi_bars: the importance ranking series is empty");
  const std::size_t k = std::min(std::max<std::size_t>(top_k, 1), r.order.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < k; ++i) vmax = std::max(vmax, finite_or(r.scores[r.order[i]], 0.0));
  if (vmax <= 0.0) vmax = 1.0;
  Document doc(width, height);
  title(doc, width, t);
  const double left = 90, right = width - 60, top = 40, bottom = height - 50;
  const Scale sx{0.0, vmax, left, right};
  const double band = (bottom - top) / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t f = r.order[i];
    const double v = finite_or(r.scores[f], 0.0);
    const double y = top + band * static_cast<double>(i);
    doc.rect(left, y + 0.15 * band, sx(std::max(v, 0.0)) - left, 0.7 * band,
             r.names[f] == "Region" ? "#7f7f7f" : "#4c72b0");
    doc.text(left - 6, y + 0.5 * band + 4, r.names[f], 11, "end");
    doc.text(sx(std::max(v, 0.0)) + 4, y + 0.5 * band + 4, num3(r.scores[f]), 9);
  }
  doc.line(left, bottom, right, bottom, "#000000");
  for (double tk : svg::ticks(0.0, vmax)) {
    doc.line(sx(tk), bottom, sx(tk), bottom + 4, "#000000");
    doc.text(sx(tk), bottom + 16, num3(tk), 10, "middle");
  }
  doc.text(0.5 * (left + right), bottom + 34, "Variable importance (OOB loss increase)", 11, "middle");
  return doc.str();
}

std::string render_q4_display(const workflow::Q4Display& d, const std::string& t, double width, double height) {
  const bool cont = d.kind == ColumnKind::continuous;
  if (cont && d.curve.points.empty()) throw DataError("q4_display: the smooth_curve series is empty");
  if (!cont && d.levels.empty()) throw DataError("q4_display: the level summary series is empty");
  if (d.region_counts.size() != 2) throw DataError("q4_display: the region_histograms series is empty");

  Document doc(width, height);
  title(doc, width, t);
  const double left = 70, right = width - 20;
  const double top1 = 40, bottom1 = 40 + (height - 90) * 0.62;
  const double top2 = bottom1 + 40, bottom2 = height - 40;

  double xlo, xhi;
  if (cont) {
    xlo = d.curve.points.front().x;
    xhi = d.curve.points.back().x;
    if (!d.bin_edges.empty()) {
      xlo = std::min(xlo, d.bin_edges.front());
      xhi = std::max(xhi, d.bin_edges.back());
    }
  } else {
    xlo = -0.5;
    xhi = static_cast<double>(d.levels.size()) - 0.5;
  }
  double ylo = finite_or(d.overall_ate, 0.0), yhi = ylo;
  auto grow = [&](double v) {
    if (std::isfinite(v)) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  };
  for (const auto& p : d.curve.points) {
    grow(p.lower);
    grow(p.upper);
  }
  for (const auto& l : d.levels) {
    grow(l.lower);
    grow(l.upper);
  }
  for (const auto& m : d.region_markers) {
    grow(m.lower);
    grow(m.upper);
  }
  if (yhi <= ylo) yhi = ylo + 1.0;
  const double pad = 0.05 * (yhi - ylo);
  const Scale sx{xlo, xhi, left, right};
  const Scale sy{ylo - pad, yhi + pad, bottom1, top1};
  const auto yt = svg::ticks(ylo - pad, yhi + pad);
  std::vector<double> xt;
  if (cont) xt = svg::ticks(xlo, xhi);
  axes(doc, sx, sy, xt, yt, "", "Pseudo-outcome");

  doc.line(left, sy(d.overall_ate), right, sy(d.overall_ate), "#555555", 1.0, "5,4");
  if (cont) {
    std::vector<std::pair<double, double>> band, fit;
    for (const auto& p : d.curve.points) {
      band.emplace_back(sx(p.x), sy(p.upper));
      fit.emplace_back(sx(p.x), sy(p.fit));
    }
    for (auto it = d.curve.points.rbegin(); it != d.curve.points.rend(); ++it) band.emplace_back(sx(it->x), sy(it->lower));
    doc.polygon(band, "#bbbbbb", 0.5);
    doc.polyline(fit, "#000000", 1.8);
    for (const auto& m : d.region_markers) {
      if (!std::isfinite(m.median_x) || !std::isfinite(m.estimate)) continue;
      doc.line(sx(m.median_x), sy(m.lower), sx(m.median_x), sy(m.upper), region_colour(m.region), 1.5);
      doc.diamond(sx(m.median_x), sy(m.estimate), 6, region_colour(m.region));
    }
  } else {
    for (std::size_t l = 0; l < d.levels.size(); ++l) {
      const auto& lv = d.levels[l];
      const double x = sx(static_cast<double>(l));
      if (std::isfinite(lv.lower) && std::isfinite(lv.upper)) doc.line(x, sy(lv.lower), x, sy(lv.upper), "#000000", 1.5);
      if (std::isfinite(lv.mean)) doc.circle(x, sy(lv.mean), 4, "#000000");
      doc.text(x, bottom1 + 16, lv.level + " (n=" + std::to_string(lv.n) + ")", 10, "middle");
    }
    // Region effects sit at the right edge of each side, in region colours.
    for (const auto& m : d.region_markers) {
      if (!std::isfinite(m.estimate)) continue;
      const double x = m.region == 0 ? left + 14 : right - 14;
      doc.line(x, sy(m.lower), x, sy(m.upper), region_colour(m.region), 1.5);
      doc.diamond(x, sy(m.estimate), 6, region_colour(m.region));
    }
  }
  doc.text(right - 4, top1 + 12, "Region 0", 10, "end");
  doc.rect(right - 70, top1 + 4, 9, 9, region_colour(0));
  doc.text(right - 4, top1 + 26, "Region 1", 10, "end");
  doc.rect(right - 70, top1 + 18, 9, 9, region_colour(1));

  // Histogram by region.
  const std::size_t bins = d.region_counts[0].size();
  std::size_t cmax = 1;
  for (const auto& row : d.region_counts)
    for (std::size_t c : row) cmax = std::max(cmax, c);
  const Scale sc{0.0, static_cast<double>(cmax), bottom2, top2};
  std::vector<double> hxt;
  if (cont) hxt = svg::ticks(xlo, xhi);
  axes(doc, sx, sc, hxt, svg::ticks(0.0, static_cast<double>(cmax), 3), d.covariate, "Count");
  for (std::size_t b = 0; b < bins; ++b) {
    double a, e;
    if (cont && d.bin_edges.size() == bins + 1) {
      a = sx(d.bin_edges[b]);
      e = sx(d.bin_edges[b + 1]);
    } else {
      a = sx(static_cast<double>(b) - 0.4);
      e = sx(static_cast<double>(b) + 0.4);
    }
    const double w = 0.5 * (e - a);
    for (int r = 0; r < 2; ++r) {
      const double c = static_cast<double>(d.region_counts[static_cast<std::size_t>(r)][b]);
      doc.rect(a + w * r, sc(c), w * 0.95, bottom2 - sc(c), region_colour(r));
    }
  }
  return doc.str();
}

std::string render_ecdf_panel(const std::vector<EcdfSeries>& series, const std::string& t, double width,
                              double height) {
  if (series.empty()) throw DataError("ecdf_panel: no p-value series");
  for (const auto& s : series)
    if (s.sorted_p.empty()) throw DataError("ecdf_panel: series '" + s.label + "' is empty");
  Document doc(width, height);
  title(doc, width, t);
  const double left = 60, right = width - 20, top = 40, bottom = height - 50;
  const Scale sx{0.0, 1.0, left, right}, sy{0.0, 1.0, bottom, top};
  const std::vector<double> tk{0.0, 0.25, 0.5, 0.75, 1.0};
  axes(doc, sx, sy, tk, tk, "p-value", "ECDF");
  doc.line(sx(0), sy(0), sx(1), sy(1), "#999999", 1.0, "4,3");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& p = series[k].sorted_p;
    const double n = static_cast<double>(p.size());
    std::vector<std::pair<double, double>> pts{{sx(0), sy(0)}};
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x = std::clamp(p[i], 0.0, 1.0);
      pts.emplace_back(sx(x), sy(static_cast<double>(i) / n));
      pts.emplace_back(sx(x), sy(static_cast<double>(i + 1) / n));
    }
    pts.emplace_back(sx(1), sy(1));
    const char* colour = palette[k % 10];
    doc.polyline(pts, colour, 1.2);
    if (series.size() <= 10) {
      doc.rect(left + 8, top + 6 + 14 * static_cast<double>(k), 9, 9, colour);
      doc.text(left + 21, top + 14 + 14 * static_cast<double>(k), series[k].label, 9);
    }
  }
  return doc.str();
}

namespace {

std::vector<const harness::ConfigSummary*> select(const harness::MeasureSummary& s, int scenario, harness::Case c) {
  std::vector<const harness::ConfigSummary*> out;
  for (const auto& cs : s.configs)
    if (cs.key.scenario == scenario && cs.key.analysis_case == c) out.push_back(&cs);
  return out;
}

std::string render_heatmap(const harness::MeasureSummary& s, const FigureSpec& f) {
  const auto sel = select(s, f.scenario, f.analysis_case);
  if (sel.empty()) throw DataError("surprise_heatmap: no configurations for the requested scenario and case");
  std::set<double> br, ors;
  for (auto* c : sel) {
    br.insert(c->key.beta_ratio);
    ors.insert(c->key.odds_ratio);
  }
  const std::vector<double> rows(br.begin(), br.end()), cols(ors.begin(), ors.end());
  double vmax = 6.0;
  for (auto* c : sel) vmax = std::max(vmax, finite_or(c->median_surprise.at(f.family), 0.0));
  Document doc(f.width, f.height);
  title(doc, f.width, f.title);
  const double left = 90, right = f.width - 20, top = 40, bottom = f.height - 50;
  const double cw = (right - left) / static_cast<double>(cols.size()), ch = (bottom - top) / static_cast<double>(rows.size());
  for (auto* c : sel) {
    const auto i = static_cast<double>(std::find(rows.begin(), rows.end(), c->key.beta_ratio) - rows.begin());
    const auto j = static_cast<double>(std::find(cols.begin(), cols.end(), c->key.odds_ratio) - cols.begin());
    const double v = c->median_surprise.at(f.family);
    const double u = std::clamp(finite_or(v, 0.0) / vmax, 0.0, 1.0);
    char colour[8];
    std::snprintf(colour, sizeof colour, "#%02x%02x%02x", 255, static_cast<int>(std::lround(255 * (1 - 0.85 * u))),
                  static_cast<int>(std::lround(255 * (1 - u))));
    const double y = bottom - (i + 1) * ch;
    doc.rect(left + j * cw, y, cw, ch, colour, "#ffffff");
    doc.text(left + (j + 0.5) * cw, y + 0.5 * ch + 4, num2(v), 11, "middle");
  }
  for (std::size_t j = 0; j < cols.size(); ++j)
    doc.text(left + (static_cast<double>(j) + 0.5) * cw, bottom + 16, io::format_double(cols[j]), 10, "middle");
  for (std::size_t i = 0; i < rows.size(); ++i)
    doc.text(left - 8, bottom - (static_cast<double>(i) + 0.5) * ch + 4, io::format_double(rows[i]), 10, "end");
  doc.text(0.5 * (left + right), bottom + 34, "Odds ratio", 11, "middle");
  doc.text(left - 50, 0.5 * (top + bottom), "beta1 / beta1*", 11, "middle", -90);
  return doc.str();
}

double hit_measure(const harness::ConfigSummary& c, const std::string& m) {
  if (m == "q2_top1") return c.q2_top1_hit;
  if (m == "q3_top1") return c.q3_top1_hit;
  if (m == "overlap") return c.overlap_recovery;
  throw ConfigError("hit measure must be q2_top1, q3_top1 or overlap");
}

std::string render_hits(const harness::MeasureSummary& s, const FigureSpec& f) {
  const auto sel = select(s, f.scenario, f.analysis_case);
  std::set<double> br, ors;
  bool any = false;
  for (auto* c : sel) {
    br.insert(c->key.beta_ratio);
    ors.insert(c->key.odds_ratio);
    any = any || std::isfinite(hit_measure(*c, f.measure));
  }
  if (!any) throw DataError("hit_curves: no truth-based " + f.measure + " series for the requested scenario and case");
  const std::vector<double> cols(ors.begin(), ors.end());
  Document doc(f.width, f.height);
  title(doc, f.width, f.title);
  const double left = 60, right = f.width - 130, top = 40, bottom = f.height - 50;
  const Scale sx{-0.5, static_cast<double>(cols.size()) - 0.5, left, right}, sy{0.0, 1.0, bottom, top};
  axes(doc, sx, sy, {}, {0.0, 0.25, 0.5, 0.75, 1.0}, "Odds ratio", f.measure + " rate");
  for (std::size_t j = 0; j < cols.size(); ++j)
    doc.text(sx(static_cast<double>(j)), bottom + 16, io::format_double(cols[j]), 10, "middle");
  std::size_t k = 0;
  for (double b : br) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (auto* c : sel)
        if (c->key.beta_ratio == b && c->key.odds_ratio == cols[j]) {
          const double v = hit_measure(*c, f.measure);
          if (!std::isfinite(v)) continue;
          pts.emplace_back(sx(static_cast<double>(j)), sy(v));
        }
    const char* colour = palette[k % 10];
    if (!pts.empty()) {
      doc.polyline(pts, colour, 1.6);
      for (const auto& [x, y] : pts) doc.circle(x, y, 3, colour);
    }
    doc.rect(right + 12, top + 14 * static_cast<double>(k), 9, 9, colour);
    doc.text(right + 25, top + 8 + 14 * static_cast<double>(k), "beta/beta*=" + io::format_double(b), 9);
    ++k;
  }
  return doc.str();
}

std::string render_profiles(const harness::MeasureSummary& s, const FigureSpec& f) {
  const auto* c = s.find({f.scenario, f.beta_ratio, f.odds_ratio, f.analysis_case});
  if (!c || c->profiles.empty()) throw DataError("profile_dots: no selection profile for the requested configuration");
  auto pick = [&](const harness::VariableProfile& v) {
    if (f.set == "q2_top5") return v.q2_top5;
    if (f.set == "q3_top5") return v.q3_top5;
    if (f.set == "overlap") return v.overlap;
    throw ConfigError("profile set must be q2_top5, q3_top5 or overlap");
  };
  std::vector<std::pair<std::string, double>> rows;
  for (const auto& [name, v] : c->profiles) rows.emplace_back(name, pick(v));
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (rows.size() > f.top_k * 2) rows.resize(f.top_k * 2);
  Document doc(f.width, f.height);
  title(doc, f.width, f.title);
  const double left = 90, right = f.width - 20, top = 40, bottom = f.height - 50;
  const Scale sx{0.0, 1.0, left, right};
  const double band = (bottom - top) / static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = top + band * (static_cast<double>(i) + 0.5);
    doc.line(left, y, right, y, "#eeeeee");
    doc.circle(sx(rows[i].second), y, 4, rows[i].first == "Region" ? "#7f7f7f" : "#4c72b0");
    doc.text(left - 6, y + 4, rows[i].first, 10, "end");
  }
  doc.line(left, bottom, right, bottom, "#000000");
  for (double tk : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    doc.line(sx(tk), bottom, sx(tk), bottom + 4, "#000000");
    doc.text(sx(tk), bottom + 16, num3(tk), 10, "middle");
  }
  doc.text(0.5 * (left + right), bottom + 34, "Selection frequency (" + f.set + ")", 11, "middle");
  return doc.str();
}

}  // namespace

std::string render(const FigureSpec& f, const workflow::WorkflowReport& r) {
  switch (f.kind) {
    case FigureKind::vi_bars:
      if (f.ranking != "q2" && f.ranking != "q3") throw ConfigError("vi_bars ranking must be q2 or q3");
      return render_vi_bars(f.ranking == "q2" ? r.q2_ranking : r.q3_ranking, f.title, f.top_k, f.width, f.height);
    case FigureKind::q4_display: {
      if (r.q4_displays.empty()) throw DataError("q4_display: the report has no Q4 displays (empty overlap)");
      for (const auto& d : r.q4_displays)
        if (f.covariate.empty() || d.covariate == f.covariate) return render_q4_display(d, f.title, f.width, f.height);
      throw DataError("q4_display: no display for covariate '" + f.covariate + "'");
    }
    default:
      throw ConfigError(std::string(to_string(f.kind)) + " needs a simulation summary");
  }
}

std::string render(const FigureSpec& f, const harness::MeasureSummary& s) {
  switch (f.kind) {
    case FigureKind::ecdf_panel: {
      std::vector<EcdfSeries> series;
      for (auto* c : select(s, f.scenario, f.analysis_case)) series.push_back({key_label(c->key), c->ecdf.at(f.family)});
      if (series.empty()) throw DataError("ecdf_panel: no configurations for the requested scenario and case");
      return render_ecdf_panel(series, f.title, f.width, f.height);
    }
    case FigureKind::surprise_heatmap: return render_heatmap(s, f);
    case FigureKind::hit_curves: return render_hits(s, f);
    case FigureKind::profile_dots: return render_profiles(s, f);
    default: throw ConfigError(std::string(to_string(f.kind)) + " needs a workflow report");
  }
}

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& what,
                                               std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : l) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    f.push_back(cur);
    return f;
  };
  if (!std::getline(in, line)) throw DataError(what + " is empty");
  header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != header.size()) throw DataError(what + ": row has " + std::to_string(f.size()) + " fields");
    rows.push_back(std::move(f));
  }
  return rows;
}

std::size_t col(const std::vector<std::string>& header, const std::string& name, const std::string& what) {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw DataError(what + " lacks column '" + name + "'");
}

harness::Family family_from(const std::string& s) {
  if (s == "p_rv") return harness::Family::p_rv;
  if (s == "p_ri") return harness::Family::p_ri;
  if (s == "p_teh") return harness::Family::p_teh;
  throw DataError("unknown p-value family '" + s + "'");
}

std::vector<std::string> split_targets(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

harness::MeasureSummary summary_from_csv(const std::string& ecdf, const std::string& surprise, const std::string& hits,
                                         const std::string& profiles) {
  std::map<harness::ConfigKey, harness::ConfigSummary> m;
  std::vector<std::string> h;
  auto key_of = [&](const std::vector<std::string>& r, const std::string& what) {
    harness::ConfigKey k{std::stoi(r[col(h, "scenario", what)]), io::parse_double(r[col(h, "beta_ratio", what)], what),
                         io::parse_double(r[col(h, "odds_ratio", what)], what),
                         harness::case_from_string(r[col(h, "case", what)])};
    m[k].key = k;
    return k;
  };
  try {
    for (const auto& r : csv_rows(hits, "hits.csv", h)) {
      auto& c = m[key_of(r, "hits.csv")];
      c.n_ok = std::stoul(r[col(h, "n_ok", "hits.csv")]);
      c.n_failed = std::stoul(r[col(h, "n_failed", "hits.csv")]);
      c.q2_targets = split_targets(r[col(h, "q2_targets", "hits.csv")]);
      c.q3_targets = split_targets(r[col(h, "q3_targets", "hits.csv")]);
      c.q2_top1_hit = io::parse_double(r[col(h, "q2_top1_hit", "hits.csv")], "hits.csv");
      c.q3_top1_hit = io::parse_double(r[col(h, "q3_top1_hit", "hits.csv")], "hits.csv");
      c.overlap_recovery = io::parse_double(r[col(h, "overlap_recovery", "hits.csv")], "hits.csv");
    }
    for (const auto& r : csv_rows(surprise, "surprise.csv", h)) {
      auto& c = m[key_of(r, "surprise.csv")];
      const auto f = family_from(r[col(h, "family", "surprise.csv")]);
      c.median_surprise[f] = io::parse_double(r[col(h, "median_surprise", "surprise.csv")], "surprise.csv");
      c.ks_uniform[f] = io::parse_double(r[col(h, "ks_uniform", "surprise.csv")], "surprise.csv");
    }
    for (const auto& r : csv_rows(ecdf, "ecdf.csv", h)) {
      auto& c = m[key_of(r, "ecdf.csv")];
      c.ecdf[family_from(r[col(h, "family", "ecdf.csv")])].push_back(
          io::parse_double(r[col(h, "p_value", "ecdf.csv")], "ecdf.csv"));
    }
    for (const auto& r : csv_rows(profiles, "profiles.csv", h)) {
      auto& c = m[key_of(r, "profiles.csv")];
      harness::VariableProfile v;
      v.q2_top5 = io::parse_double(r[col(h, "q2_top5", "profiles.csv")], "profiles.csv");
      v.q3_top5 = io::parse_double(r[col(h, "q3_top5", "profiles.csv")], "profiles.csv");
      v.overlap = io::parse_double(r[col(h, "overlap", "profiles.csv")], "profiles.csv");
      v.q2_top1 = io::parse_double(r[col(h, "q2_top1", "profiles.csv")], "profiles.csv");
      v.q3_top1 = io::parse_double(r[col(h, "q3_top1", "profiles.csv")], "profiles.csv");
      c.profiles[r[col(h, "variable", "profiles.csv")]] = v;
    }
  } catch (const std::invalid_argument&) {
    throw DataError("summary CSV holds a malformed number");
  } catch (const std::out_of_range&) {
    throw DataError("summary CSV holds an out-of-range number");
  }
  harness::MeasureSummary s;
  for (auto& [k, c] : m) {
    for (auto& [f, v] : c.ecdf) std::sort(v.begin(), v.end());
    s.n_failed += c.n_failed;
    s.configs.push_back(std::move(c));
  }
  return s;
}

std::string render_arm_curves(const workflow::Q4Display& d, const std::string& t, double width, double height) {
  if (d.arm_curves.size() != 2) throw DataError("arm_curves: the per-arm outcome series is empty");
  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
  for (const auto& c : d.arm_curves)
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      xlo = std::min(xlo, c.x[i]);
      xhi = std::max(xhi, c.x[i]);
      if (!std::isfinite(c.mean[i])) continue;
      ylo = std::min(ylo, c.mean[i]);
      yhi = std::max(yhi, c.mean[i]);
    }
  if (!std::isfinite(ylo)) throw DataError("arm_curves: every bin of the per-arm outcome series is empty");
  const bool cont = d.kind == ColumnKind::continuous;
  if (!cont) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  const double pad = 0.08 * std::max(yhi - ylo, 1e-6);
  ylo -= pad;
  yhi += pad;
  Document doc(width, height);
  title(doc, width, t);
  const double left = 70, right = width - 20, top = 40, bottom = height - 50;
  const Scale sx{xlo, xhi, left, right}, sy{ylo, yhi, bottom, top};
  std::vector<double> xt;
  if (cont) {
    xt = svg::ticks(xlo, xhi);
  } else {
    for (int l = 0; l < static_cast<int>(d.arm_curves[0].x.size()); ++l) xt.push_back(l);
  }
  axes(doc, sx, sy, cont ? xt : std::vector<double>{}, svg::ticks(ylo, yhi), cont ? d.covariate : "",
       "Mean outcome");
  if (!cont) {
    for (std::size_t l = 0; l < d.levels.size(); ++l) {
      const double x = sx(static_cast<double>(l));
      doc.line(x, bottom, x, bottom + 4, "#000000");
      doc.text(x, bottom + 16, d.levels[l].level, 10, "middle");
    }
    doc.text(0.5 * (left + right), bottom + 34, d.covariate, 11, "middle");
  }
  const char* colour[2] = {"#7f7f7f", "#000000"};
  for (const auto& c : d.arm_curves) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.mean[i])) continue;
      pts.emplace_back(sx(c.x[i]), sy(c.mean[i]));
      doc.circle(sx(c.x[i]), sy(c.mean[i]), 3, colour[c.arm]);
    }
    if (pts.size() > 1) doc.polyline(pts, colour[c.arm], 1.5);
  }
  for (int a = 0; a < 2; ++a) {
    doc.rect(right - 120, top + 4 + 16 * a, 10, 10, colour[a]);
    doc.text(right - 104, top + 13 + 16 * a, a == 0 ? "Control (Z = 0)" : "Treated (Z = 1)", 10);
  }
  return doc.str();
}

std::vector<std::pair<std::string, std::string>> report_figures(const workflow::WorkflowReport& r) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("vi_q2.svg", render_vi_bars(r.q2_ranking, "Q2: Region ~ covariates", 10));
  out.emplace_back("vi_q3.svg", render_vi_bars(r.q3_ranking, "Q3: pseudo-outcome ~ covariates + Region", 10));
  for (const auto& d : r.q4_displays) {
    out.emplace_back("q4_" + d.covariate + ".svg", render_q4_display(d, "Q4: " + d.covariate));
    if (!d.arm_curves.empty())
      out.emplace_back("arms_" + d.covariate + ".svg", render_arm_curves(d, "Outcome by arm: " + d.covariate));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> summary_figures(const harness::MeasureSummary& s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::pair<int, harness::Case>> groups;
  for (const auto& c : s.configs) groups.insert({c.key.scenario, c.key.analysis_case});
  for (const auto& [scenario, cs] : groups) {
    const std::string tag = "s" + std::to_string(scenario) + "_" + harness::to_string(cs);
    const std::string label = "Scenario " + std::to_string(scenario) + ", " + harness::to_string(cs);
    FigureSpec f;
    f.scenario = scenario;
    f.analysis_case = cs;
    for (harness::Family fam : {harness::Family::p_rv, harness::Family::p_ri, harness::Family::p_teh}) {
      f.family = fam;
      f.kind = FigureKind::ecdf_panel;
      f.width = 420;
      f.height = 420;
      f.title = std::string("ECDF of ") + harness::to_string(fam) + ", " + label;
      out.emplace_back(std::string("ecdf_") + harness::to_string(fam) + "_" + tag + ".svg", render(f, s));
      f.kind = FigureKind::surprise_heatmap;
      f.width = 560;
      f.title = std::string("Median surprise of ") + harness::to_string(fam) + ", " + label;
      out.emplace_back(std::string("surprise_") + harness::to_string(fam) + "_" + tag + ".svg", render(f, s));
    }
    f.width = 640;
    f.height = 420;
    for (const char* m : {"q2_top1", "q3_top1", "overlap"}) {
      f.kind = FigureKind::hit_curves;
      f.measure = m;
      f.title = std::string("Hit rate (") + m + "), " + label;
      try {
        out.emplace_back(std::string("hits_") + m + "_" + tag + ".svg", render(f, s));
      } catch (const DataError&) {
        // No truth-based target in this case.
      }
    }
    // Profiles at the strongest configuration of the group.
    const harness::ConfigSummary* best = nullptr;
    for (const auto& c : s.configs)
      if (c.key.scenario == scenario && c.key.analysis_case == cs &&
          (!best || std::pair{c.key.beta_ratio, c.key.odds_ratio} > std::pair{best->key.beta_ratio, best->key.odds_ratio}))
        best = &c;
    if (best && !best->profiles.empty()) {
      f.kind = FigureKind::profile_dots;
      f.beta_ratio = best->key.beta_ratio;
      f.odds_ratio = best->key.odds_ratio;
      for (const char* set : {"q2_top5", "q3_top5", "overlap"}) {
        f.set = set;
        f.title = std::string("Selection profile (") + set + "), " + label + ", " + key_label(best->key);
        out.emplace_back(std::string("profiles_") + set + "_" + tag + ".svg", render(f, s));
      }
    }
  }
  return out;
}

}  // namespace rhet::figures
