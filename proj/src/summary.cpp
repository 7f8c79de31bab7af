#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "rhet/harness.hpp"
#include "rhet/stats.hpp"

namespace rhet::harness {

const char* to_string(Family f) {
  switch (f) {
    case Family::p_rv: return "p_rv";
    case Family::p_ri: return "p_ri";
    case Family::p_teh: return "p_teh";
  }
  return "?";
}

std::vector<std::string> q2_targets(int scenario, Case c) {
  if (c == Case::observed) return {datagen::scenario_spec(scenario).x_pred_name};
  if (scenario == 2) return {"X12", "X9"};
  return {};
}

std::vector<std::string> q3_targets(int scenario, Case c) {
  auto t = q2_targets(scenario, c);
  if (c == Case::unobserved && scenario == 2) t.push_back("Region");
  return t;
}

double ks_uniform(std::vector<double> x) {
  if (x.empty()) return std::nan("");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = std::clamp(x[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

double median_surprise(const std::vector<double>& p) {
  if (p.empty()) return std::nan("");
  std::vector<double> s;
  s.reserve(p.size());
  for (double v : p) s.push_back(-std::log2(v));
  return stats::median(s);
}

const ConfigSummary* MeasureSummary::find(const ConfigKey& key) const {
  for (const auto& c : configs)
    if (c.key == key) return &c;
  return nullptr;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool any_in(const std::vector<std::string>& targets, const std::vector<std::string>& set) {
  return std::any_of(targets.begin(), targets.end(), [&](const std::string& t) { return contains(set, t); });
}

}  // namespace

MeasureSummary summarize(const std::vector<ReplicateRecord>& records) {
  std::map<ConfigKey, std::vector<const ReplicateRecord*>> groups;
  for (const auto& r : records) groups[{r.scenario, r.beta_ratio, r.odds_ratio, r.analysis_case}].push_back(&r);

  MeasureSummary out;
  for (const auto& [key, recs] : groups) {
    ConfigSummary s;
    s.key = key;
    s.q2_targets = q2_targets(key.scenario, key.analysis_case);
    s.q3_targets = q3_targets(key.scenario, key.analysis_case);
    std::vector<double> p[3];
    std::size_t hit2 = 0, hit3 = 0, rec = 0;
    std::set<std::string> names;
    for (const ReplicateRecord* r : recs) {
      if (!r->ok) {
        ++s.n_failed;
        continue;
      }
      ++s.n_ok;
      p[0].push_back(r->p_rv);
      p[1].push_back(r->p_ri);
      p[2].push_back(r->p_teh);
      hit2 += contains(s.q2_targets, r->top1_q2);
      hit3 += contains(s.q3_targets, r->top1_q3);
      rec += any_in(s.q2_targets, r->overlap);
      for (const auto& v : r->q2_top5) names.insert(v);
      for (const auto& v : r->q3_top5) names.insert(v);
    }
    const Family fam[3] = {Family::p_rv, Family::p_ri, Family::p_teh};
    for (int f = 0; f < 3; ++f) {
      std::sort(p[f].begin(), p[f].end());
      s.median_surprise[fam[f]] = median_surprise(p[f]);
      s.ks_uniform[fam[f]] = ks_uniform(p[f]);
      s.ecdf[fam[f]] = std::move(p[f]);
    }
    const double n = static_cast<double>(s.n_ok);
    const double nan = std::nan("");
    s.q2_top1_hit = s.q2_targets.empty() || s.n_ok == 0 ? nan : static_cast<double>(hit2) / n;
    s.q3_top1_hit = s.q3_targets.empty() || s.n_ok == 0 ? nan : static_cast<double>(hit3) / n;
    s.overlap_recovery = s.q2_targets.empty() || s.n_ok == 0 ? nan : static_cast<double>(rec) / n;
    for (const auto& name : names) {
      VariableProfile vp;
      for (const ReplicateRecord* r : recs) {
        if (!r->ok) continue;
        vp.q2_top5 += contains(r->q2_top5, name);
        vp.q3_top5 += contains(r->q3_top5, name);
        vp.overlap += contains(r->overlap, name);
        vp.q2_top1 += r->top1_q2 == name;
        vp.q3_top1 += r->top1_q3 == name;
      }
      vp.q2_top5 /= n;
      vp.q3_top5 /= n;
      vp.overlap /= n;
      vp.q2_top1 /= n;
      vp.q3_top1 /= n;
      s.profiles[name] = vp;
    }
    out.n_failed += s.n_failed;
    out.configs.push_back(std::move(s));
  }
  return out;
}

namespace {

// Natural order of covariate names for the profile rows.
bool name_less(const std::string& a, const std::string& b) {
  auto num = [](const std::string& s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) --k;
    return std::pair{s.substr(0, k), k < s.size() ? std::stol(s.substr(k)) : -1L};
  };
  return num(a) < num(b);
}

std::string key_fields(const ConfigKey& k) {
  return std::to_string(k.scenario) + "," + to_string(k.analysis_case) + "," + io::format_double(k.beta_ratio) + "," +
         io::format_double(k.odds_ratio);
}

const char* key_header = "scenario,case,beta_ratio,odds_ratio";

}  // namespace

std::string ecdf_csv(const MeasureSummary& s) {
  std::string out = std::string(key_header) + ",family,index,p_value,ecdf\n";
  for (const auto& c : s.configs)
    for (const auto& [f, v] : c.ecdf)
      for (std::size_t i = 0; i < v.size(); ++i)
        out += key_fields(c.key) + "," + to_string(f) + "," + std::to_string(i + 1) + "," + io::format_double(v[i]) +
               "," + io::format_double(static_cast<double>(i + 1) / static_cast<double>(v.size())) + "\n";
  return out;
}

std::string surprise_csv(const MeasureSummary& s) {
  std::string out = std::string(key_header) + ",family,n,median_surprise,ks_uniform\n";
  for (const auto& c : s.configs)
    for (const auto& [f, m] : c.median_surprise)
      out += key_fields(c.key) + "," + to_string(f) + "," + std::to_string(c.n_ok) + "," + io::format_double(m) + "," +
             io::format_double(c.ks_uniform.at(f)) + "\n";
  return out;
}

std::string hits_csv(const MeasureSummary& s) {
  std::string out = std::string(key_header) + ",n_ok,n_failed,q2_targets,q3_targets,q2_top1_hit,q3_top1_hit,overlap_recovery\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string r;
    for (const auto& x : v) r += (r.empty() ? "" : ";") + x;
    return r;
  };
  for (const auto& c : s.configs)
    out += key_fields(c.key) + "," + std::to_string(c.n_ok) + "," + std::to_string(c.n_failed) + "," + join(c.q2_targets) +
           "," + join(c.q3_targets) + "," + io::format_double(c.q2_top1_hit) + "," + io::format_double(c.q3_top1_hit) +
           "," + io::format_double(c.overlap_recovery) + "\n";
  return out;
}

std::string profiles_csv(const MeasureSummary& s) {
  std::string out = std::string(key_header) + ",variable,q2_top5,q3_top5,overlap,q2_top1,q3_top1\n";
  for (const auto& c : s.configs) {
    std::vector<std::string> names;
    for (const auto& [name, vp] : c.profiles) names.push_back(name);
    std::stable_sort(names.begin(), names.end(), name_less);
    for (const auto& name : names) {
      const auto& vp = c.profiles.at(name);
      out += key_fields(c.key) + "," + name + "," + io::format_double(vp.q2_top5) + "," + io::format_double(vp.q3_top5) +
             "," + io::format_double(vp.overlap) + "," + io::format_double(vp.q2_top1) + "," +
             io::format_double(vp.q3_top1) + "\n";
    }
  }
  return out;
}

}  // namespace rhet::harness
