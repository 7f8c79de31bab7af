#include "rhet/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rhet/error.hpp"

namespace rhet::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& what) {
  if (text == "nan" || text == "NaN" || text == "NA") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || text.empty())
    throw DataError(what + ": '" + text + "' is not a number");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out) throw DataError("write to '" + path + "' failed");
  }
  std::filesystem::rename(tmp, p);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(what + ": invalid JSON (" + e.what() + ")");
  }
}

namespace {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double get_num(const Json& j) {
  if (j.is_null()) return std::nan("");
  if (!j.is_number()) throw DataError("expected a number, got " + j.dump());
  return j.get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string dataset_csv(const datagen::TrialDataset& d) {
  d.validate();
  std::string out;
  const auto& cols = d.covariates.columns();
  for (const auto& c : cols) out += csv_field(c.name) + ",";
  out += "Z,Y,Region\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (const auto& c : cols) {
      if (c.kind == ColumnKind::continuous)
        out += format_double(c.values[i]);
      else
        out += csv_field(c.levels[static_cast<std::size_t>(c.values[i])]);
      out += ',';
    }
    out += std::to_string(d.treatment[i]) + ',' + format_double(d.outcome[i]) + ',' + std::to_string(d.region[i]) +
           '\n';
  }
  return out;
}

Json schema_to_json(const datagen::TrialDataset& d) {
  Json j;
  j["format"] = "rhet-schema/1";
  Json cols = Json::array();
  for (const auto& c : d.schema.columns) {
    Json cj;
    cj["name"] = c.name;
    cj["kind"] = to_string(c.kind);
    cj["role"] = datagen::to_string(c.role);
    if (c.kind != ColumnKind::continuous) {
      cj["levels"] = c.levels;
      cj["level_probs"] = c.level_probs;
    }
    cols.push_back(cj);
  }
  j["columns"] = cols;
  j["outcome_columns"] = {{{"name", "Z"}, {"kind", "binary"}}, {{"name", "Y"}, {"kind", "continuous"}},
                          {{"name", "Region"}, {"kind", "binary"}}};
  Json r = Json::array();
  for (Eigen::Index a = 0; a < d.schema.latent_correlation.rows(); ++a) {
    Json row = Json::array();
    for (Eigen::Index b = 0; b < d.schema.latent_correlation.cols(); ++b) row.push_back(d.schema.latent_correlation(a, b));
    r.push_back(row);
  }
  j["latent_correlation"] = r;
  j["analysis_mask"] = d.analysis_mask;
  return j;
}

SchemaFile schema_from_json(const Json& j) {
  SchemaFile out;
  try {
    for (const auto& cj : j.at("columns")) {
      datagen::CovariateSpec c;
      c.name = cj.at("name").get<std::string>();
      c.kind = column_kind_from_string(cj.at("kind").get<std::string>());
      c.role = datagen::role_from_string(cj.value("role", std::string("noise")));
      if (c.kind != ColumnKind::continuous) {
        c.levels = cj.at("levels").get<std::vector<std::string>>();
        c.level_probs = cj.at("level_probs").get<std::vector<double>>();
      }
      out.schema.columns.push_back(std::move(c));
    }
    const auto p = static_cast<Eigen::Index>(out.schema.columns.size());
    out.schema.latent_correlation = Eigen::MatrixXd::Identity(p, p);
    if (j.contains("latent_correlation")) {
      const auto& r = j.at("latent_correlation");
      if (r.size() != static_cast<std::size_t>(p)) throw SchemaError("latent_correlation has the wrong number of rows");
      for (Eigen::Index a = 0; a < p; ++a) {
        const auto& row = r.at(static_cast<std::size_t>(a));
        if (row.size() != static_cast<std::size_t>(p)) throw SchemaError("latent_correlation row has the wrong length");
        for (Eigen::Index b = 0; b < p; ++b) out.schema.latent_correlation(a, b) = row.at(static_cast<std::size_t>(b)).get<double>();
      }
    }
    if (j.contains("analysis_mask")) out.analysis_mask = j.at("analysis_mask").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("schema file: ") + e.what());
  }
  out.schema.validate();
  for (const auto& m : out.analysis_mask)
    if (!out.schema.contains(m)) throw SchemaError("analysis mask names unknown covariate '" + m + "'");
  return out;
}

datagen::TrialDataset parse_dataset_csv(const std::string& text, const SchemaFile& sf) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);
  const std::size_t p = sf.schema.size();
  auto find_col = [&](const std::string& name) {
    std::size_t hit = header.size();
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) {
        if (hit != header.size()) throw DataError("dataset CSV repeats column '" + name + "'");
        hit = k;
      }
    if (hit == header.size()) throw DataError("dataset CSV lacks column '" + name + "'");
    return hit;
  };
  std::vector<std::size_t> pos(p);
  for (std::size_t j = 0; j < p; ++j) pos[j] = find_col(sf.schema.columns[j].name);
  const std::size_t pz = find_col("Z"), py = find_col("Y"), pr = find_col("Region");
  if (header.size() != p + 3) throw DataError("dataset CSV has columns not described by the schema");

  datagen::TrialDataset d;
  d.schema = sf.schema;
  d.analysis_mask = sf.analysis_mask;
  std::vector<Column> cols(p);
  for (std::size_t j = 0; j < p; ++j) {
    cols[j].name = sf.schema.columns[j].name;
    cols[j].kind = sf.schema.columns[j].kind;
    cols[j].levels = sf.schema.columns[j].levels;
  }
  std::size_t lineno = 1;
  auto indicator = [&](const std::string& s, const char* name) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw DataError("line " + std::to_string(lineno) + ": " + name + " must be 0 or 1, got '" + s + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()));
    const std::string where = "line " + std::to_string(lineno);
    for (std::size_t j = 0; j < p; ++j) {
      const std::string& s = f[pos[j]];
      if (cols[j].kind == ColumnKind::continuous) {
        const double v = parse_double(s, where + ", " + cols[j].name);
        if (!std::isfinite(v)) throw DataError(where + ": " + cols[j].name + " is not finite");
        cols[j].values.push_back(v);
      } else {
        int code = -1;
        for (int l = 0; l < cols[j].n_levels(); ++l)
          if (cols[j].levels[static_cast<std::size_t>(l)] == s) code = l;
        if (code < 0) throw DataError(where + ": '" + s + "' is not a level of " + cols[j].name);
        cols[j].values.push_back(code);
      }
    }
    d.treatment.push_back(indicator(f[pz], "Z"));
    const double y = parse_double(f[py], where + ", Y");
    if (!std::isfinite(y)) throw DataError(where + ": Y is not finite");
    d.outcome.push_back(y);
    d.region.push_back(indicator(f[pr], "Region"));
  }
  for (auto& c : cols) d.covariates.add(std::move(c));
  d.validate();
  return d;
}

void write_dataset(const datagen::TrialDataset& d, const std::string& csv_path, const std::string& schema_path) {
  write_file(csv_path, dataset_csv(d));
  write_file(schema_path, schema_to_json(d).dump(2) + "\n");
}

datagen::TrialDataset read_dataset(const std::string& csv_path, const std::string& schema_path) {
  const SchemaFile sf = schema_from_json(parse_json(read_file(schema_path), schema_path));
  return parse_dataset_csv(read_file(csv_path), sf);
}

Json config_to_json(const workflow::WorkflowConfig& c) {
  Json j;
  j["n_perm"] = c.n_perm;
  j["seed"] = c.seed;
  j["k_folds"] = c.k_folds;
  auto forest_json = [](const forest::ForestParams& f) {
    return Json{{"n_trees", f.n_trees},
                {"mtry", f.mtry},
                {"min_node_size", f.min_node_size},
                {"split_alpha", f.split_alpha},
                {"subsample_fraction", f.subsample_fraction}};
  };
  j["forest"] = forest_json(c.forest);
  j["learner"] = {{"forest", forest_json(c.learner.forest)},
                  {"propensity", c.learner.propensity == nuisance::PropensityModel::known ? "known" : "logistic"},
                  {"known_propensity", c.learner.known_propensity},
                  {"clip_lo", c.learner.clip_lo},
                  {"clip_hi", c.learner.clip_hi},
                  {"include_region", c.learner.include_region}};
  j["q2_loss"] = c.q2_loss == forest::ClassLoss::brier ? "brier" : "misclassification";
  j["thresholds"] = {{"no_evidence", c.thresholds.no_evidence},
                     {"strong", c.thresholds.strong},
                     {"dominance", c.thresholds.dominance},
                     {"support", c.thresholds.support},
                     {"small_region_n", c.thresholds.small_region_n},
                     {"top_k", c.thresholds.top_k}};
  j["build_displays"] = c.build_displays;
  j["grid_points"] = c.grid_points;
  j["histogram_bins"] = c.histogram_bins;
  return j;
}

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown configuration key '" + where + "." + k + "'");
  }
}

template <class T>
void take(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("configuration key '") + key + "' has the wrong type");
  }
}

void forest_from_json(const Json& j, forest::ForestParams& f, const std::string& where) {
  check_keys(j, {"n_trees", "mtry", "min_node_size", "split_alpha", "subsample_fraction"}, where);
  take(j, "n_trees", f.n_trees);
  take(j, "mtry", f.mtry);
  take(j, "min_node_size", f.min_node_size);
  take(j, "split_alpha", f.split_alpha);
  take(j, "subsample_fraction", f.subsample_fraction);
}

}  // namespace

workflow::WorkflowConfig config_from_json(const Json& j, workflow::WorkflowConfig c) {
  check_keys(j, {"n_perm", "seed", "k_folds", "forest", "learner", "q2_loss", "thresholds", "build_displays",
                 "grid_points", "histogram_bins"},
             "config");
  take(j, "n_perm", c.n_perm);
  take(j, "seed", c.seed);
  take(j, "k_folds", c.k_folds);
  if (j.contains("forest")) forest_from_json(j.at("forest"), c.forest, "forest");
  if (j.contains("learner")) {
    const Json& l = j.at("learner");
    check_keys(l, {"forest", "propensity", "known_propensity", "clip_lo", "clip_hi", "include_region"}, "learner");
    if (l.contains("forest")) forest_from_json(l.at("forest"), c.learner.forest, "learner.forest");
    std::string prop;
    take(l, "propensity", prop);
    if (prop == "known") c.learner.propensity = nuisance::PropensityModel::known;
    else if (prop == "logistic") c.learner.propensity = nuisance::PropensityModel::logistic;
    else if (!prop.empty()) throw ConfigError("propensity must be 'known' or 'logistic'");
    take(l, "known_propensity", c.learner.known_propensity);
    take(l, "clip_lo", c.learner.clip_lo);
    take(l, "clip_hi", c.learner.clip_hi);
    take(l, "include_region", c.learner.include_region);
  }
  std::string loss;
  take(j, "q2_loss", loss);
  if (loss == "brier") c.q2_loss = forest::ClassLoss::brier;
  else if (loss == "misclassification") c.q2_loss = forest::ClassLoss::misclassification;
  else if (!loss.empty()) throw ConfigError("q2_loss must be 'brier' or 'misclassification'");
  if (j.contains("thresholds")) {
    const Json& t = j.at("thresholds");
    check_keys(t, {"no_evidence", "strong", "dominance", "support", "small_region_n", "top_k"}, "thresholds");
    take(t, "no_evidence", c.thresholds.no_evidence);
    take(t, "strong", c.thresholds.strong);
    take(t, "dominance", c.thresholds.dominance);
    take(t, "support", c.thresholds.support);
    take(t, "small_region_n", c.thresholds.small_region_n);
    take(t, "top_k", c.thresholds.top_k);
  }
  take(j, "build_displays", c.build_displays);
  take(j, "grid_points", c.grid_points);
  take(j, "histogram_bins", c.histogram_bins);
  return c;
}

Json ranking_to_json(const forest::ImportanceRanking& r) {
  Json j = Json::array();
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    const std::size_t f = r.order[k];
    j.push_back({{"rank", k + 1}, {"feature", r.names[f]}, {"index", f}, {"vi", num(r.scores[f])}});
  }
  return j;
}

forest::ImportanceRanking ranking_from_json(const Json& j) {
  std::vector<std::string> names(j.size());
  std::vector<double> scores(j.size(), 0.0);
  for (const auto& e : j) {
    const auto f = e.at("index").get<std::size_t>();
    if (f >= names.size()) throw DataError("ranking index out of range");
    names[f] = e.at("feature").get<std::string>();
    scores[f] = get_num(e.at("vi"));
  }
  return forest::make_ranking(std::move(names), std::move(scores));
}

Json display_to_json(const workflow::Q4Display& d) {
  Json j;
  j["covariate"] = d.covariate;
  j["kind"] = to_string(d.kind);
  j["overall_ate"] = num(d.overall_ate);
  if (d.kind == ColumnKind::continuous) {
    Json pts = Json::array();
    for (const auto& p : d.curve.points) pts.push_back({num(p.x), num(p.fit), num(p.lower), num(p.upper)});
    j["smooth_curve"] = {{"columns", {"x", "fit", "lower", "upper"}},
                         {"points", pts},
                         {"lambda", num(d.curve.lambda)},
                         {"edf", num(d.curve.edf)}};
  } else {
    Json lv = Json::array();
    for (const auto& l : d.levels)
      lv.push_back({{"level", l.level}, {"n", l.n}, {"mean", num(l.mean)}, {"lower", num(l.lower)}, {"upper", num(l.upper)}});
    j["levels"] = lv;
  }
  Json rm = Json::array();
  for (const auto& m : d.region_markers)
    rm.push_back({{"region", m.region},
                  {"median_x", num(m.median_x)},
                  {"estimate", num(m.estimate)},
                  {"lower", num(m.lower)},
                  {"upper", num(m.upper)}});
  j["region_markers"] = rm;
  Json edges = Json::array();
  for (double e : d.bin_edges) edges.push_back(num(e));
  j["region_histograms"] = {{"bin_edges", edges}, {"counts", d.region_counts}};
  Json arms = Json::array();
  for (const auto& a : d.arm_curves) {
    Json xs = Json::array(), ms = Json::array();
    for (double v : a.x) xs.push_back(num(v));
    for (double v : a.mean) ms.push_back(num(v));
    arms.push_back({{"arm", a.arm}, {"x", xs}, {"mean", ms}});
  }
  j["arm_curves"] = arms;
  return j;
}

namespace {

std::vector<double> num_array(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_num(v));
  return out;
}

}  // namespace

workflow::Q4Display display_from_json(const Json& j) {
  workflow::Q4Display d;
  d.covariate = j.at("covariate").get<std::string>();
  d.kind = column_kind_from_string(j.at("kind").get<std::string>());
  d.overall_ate = get_num(j.at("overall_ate"));
  if (j.contains("smooth_curve")) {
    const Json& c = j.at("smooth_curve");
    for (const auto& p : c.at("points"))
      d.curve.points.push_back({get_num(p.at(0)), get_num(p.at(1)), get_num(p.at(2)), get_num(p.at(3))});
    d.curve.lambda = get_num(c.at("lambda"));
    d.curve.edf = get_num(c.at("edf"));
  }
  if (j.contains("levels"))
    for (const auto& l : j.at("levels"))
      d.levels.push_back({l.at("level").get<std::string>(), l.at("n").get<std::size_t>(), get_num(l.at("mean")),
                          get_num(l.at("lower")), get_num(l.at("upper"))});
  for (const auto& m : j.at("region_markers"))
    d.region_markers.push_back({m.at("region").get<int>(), get_num(m.at("median_x")), get_num(m.at("estimate")),
                                get_num(m.at("lower")), get_num(m.at("upper"))});
  const Json& h = j.at("region_histograms");
  d.bin_edges = num_array(h.at("bin_edges"));
  d.region_counts = h.at("counts").get<std::vector<std::vector<std::size_t>>>();
  for (const auto& a : j.at("arm_curves")) d.arm_curves.push_back({a.at("arm").get<int>(), num_array(a.at("x")), num_array(a.at("mean"))});
  return d;
}

namespace {

Json test_json(const indep::GlobalTestResult& t) {
  Json per = Json::object();
  for (std::size_t k = 0; k < t.covariate_names.size(); ++k) per[t.covariate_names[k]] = num(t.per_covariate_statistics[k]);
  return {{"p_value", num(t.p_value)},   {"statistic", num(t.statistic)},   {"n_permutations", t.n_permutations},
          {"seed", t.seed},              {"exceedances", t.exceedances},    {"degenerate", t.degenerate},
          {"per_covariate_statistics", per}};
}

indep::GlobalTestResult test_from_json(const Json& j) {
  indep::GlobalTestResult t;
  t.p_value = get_num(j.at("p_value"));
  t.statistic = get_num(j.at("statistic"));
  t.n_permutations = j.at("n_permutations").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.exceedances = j.at("exceedances").get<int>();
  t.degenerate = j.at("degenerate").get<bool>();
  for (const auto& [k, v] : j.at("per_covariate_statistics").items()) {
    t.covariate_names.push_back(k);
    t.per_covariate_statistics.push_back(get_num(v));
  }
  return t;
}

}  // namespace

Json report_to_json(const workflow::WorkflowReport& r) {
  Json j;
  j["format"] = "rhet-workflow-report/1";
  j["n"] = r.n;
  j["region_n"] = {r.region_n[0], r.region_n[1]};
  j["analysis_mask"] = r.analysis_mask;
  j["features"] = r.features;
  j["p_rv"] = test_json(r.p_rv);
  j["p_ri"] = test_json(r.p_ri);
  j["p_teh"] = test_json(r.p_teh);
  j["q2_ranking"] = ranking_to_json(r.q2_ranking);
  j["q3_ranking"] = ranking_to_json(r.q3_ranking);
  j["overlap"] = r.overlap;
  Json est = Json::array();
  for (const auto& e : r.region_estimates)
    est.push_back({{"region", e.region},
                   {"estimate", num(e.estimate)},
                   {"se", num(e.se)},
                   {"lower", num(e.lower)},
                   {"upper", num(e.upper)},
                   {"n", e.n}});
  j["region_estimates"] = est;
  j["terminal"] = workflow::to_string(r.decision.terminal);
  j["rationale"] = r.decision.rationale;
  Json disp = Json::array();
  for (const auto& d : r.q4_displays) disp.push_back(display_to_json(d));
  j["q4_displays"] = disp;
  Json phi = Json::array(), e = Json::array(), m0 = Json::array(), m1 = Json::array();
  for (std::size_t i = 0; i < r.pseudo.phi.size(); ++i) {
    phi.push_back(num(r.pseudo.phi[i]));
    e.push_back(num(r.pseudo.e_hat[i]));
    m0.push_back(num(r.pseudo.m0_hat[i]));
    m1.push_back(num(r.pseudo.m1_hat[i]));
  }
  j["pseudo_outcome"] = {{"phi", phi}, {"e_hat", e}, {"m0_hat", m0}, {"m1_hat", m1}, {"fold", r.pseudo.plan.fold}};
  j["config"] = config_to_json(r.config);
  return j;
}

workflow::WorkflowReport report_from_json(const Json& j) {
  workflow::WorkflowReport r;
  try {
    r.n = j.at("n").get<std::size_t>();
    r.region_n[0] = j.at("region_n").at(0).get<std::size_t>();
    r.region_n[1] = j.at("region_n").at(1).get<std::size_t>();
    r.analysis_mask = j.at("analysis_mask").get<std::vector<std::string>>();
    r.features = j.at("features").get<std::vector<std::string>>();
    r.p_rv = test_from_json(j.at("p_rv"));
    r.p_ri = test_from_json(j.at("p_ri"));
    r.p_teh = test_from_json(j.at("p_teh"));
    r.q2_ranking = ranking_from_json(j.at("q2_ranking"));
    r.q3_ranking = ranking_from_json(j.at("q3_ranking"));
    r.overlap = j.at("overlap").get<std::vector<std::string>>();
    for (const auto& e : j.at("region_estimates"))
      r.region_estimates.push_back({e.at("region").get<int>(), get_num(e.at("estimate")), get_num(e.at("se")),
                                    get_num(e.at("lower")), get_num(e.at("upper")), e.at("n").get<std::size_t>()});
    r.decision.terminal = workflow::terminal_from_string(j.at("terminal").get<std::string>());
    r.decision.rationale = j.at("rationale").get<std::string>();
    for (const auto& d : j.at("q4_displays")) r.q4_displays.push_back(display_from_json(d));
    const Json& po = j.at("pseudo_outcome");
    r.pseudo.phi = num_array(po.at("phi"));
    r.pseudo.e_hat = num_array(po.at("e_hat"));
    r.pseudo.m0_hat = num_array(po.at("m0_hat"));
    r.pseudo.m1_hat = num_array(po.at("m1_hat"));
    r.pseudo.plan.fold = po.at("fold").get<std::vector<int>>();
    r.config = config_from_json(j.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("workflow report: ") + e.what());
  }
  return r;
}

}  // namespace rhet::io
