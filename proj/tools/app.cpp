#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "awpri/cluster.hpp"
#include "awpri/econ.hpp"
#include "awpri/errors.hpp"
#include "awpri/kvconfig.hpp"
#include "awpri/pca.hpp"
#include "awpri/rankstats.hpp"
#include "awpri/serialize.hpp"
#include "awpri/synth.hpp"
#include "awpri/text.hpp"

namespace fs = std::filesystem;

namespace awpri::app {

namespace {

// ---------------------------------------------------------------------------
// Value parsers. Every failure is a ConfigError naming the key.

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& expect) {
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected " + expect + ")");
}

double as_double(const std::string& key, const std::string& v) {
  const auto d = text::parse_double(v);
  if (!d || !std::isfinite(*d)) bad(key, v, "a number");
  return *d;
}

long long as_int(const std::string& key, const std::string& v) {
  const auto i = text::parse_int(v);
  if (!i) bad(key, v, "an integer");
  return *i;
}

int as_year(const std::string& key, const std::string& v) {
  const auto i = as_int(key, v);
  if (i < 1000 || i > 9999) bad(key, v, "a four-digit year");
  return static_cast<int>(i);
}

bool as_bool(const std::string& key, const std::string& v) {
  const auto b = text::parse_bool(v);
  if (!b) bad(key, v, "true or false");
  return *b;
}

std::pair<int, int> as_year_range(const std::string& key, const std::string& v) {
  const auto dash = v.find('-');
  if (dash == std::string::npos) {
    const int y = as_year(key, v);
    return {y, y};
  }
  const int a = as_year(key, std::string(text::trim(v.substr(0, dash))));
  const int b = as_year(key, std::string(text::trim(v.substr(dash + 1))));
  if (a > b) bad(key, v, "FIRST-LAST with FIRST <= LAST");
  return {a, b};
}

std::vector<int> as_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& part : text::split_list(v)) {
    if (part.find('-') != std::string::npos) {
      const auto [a, b] = [&] {
        const auto dash = part.find('-');
        return std::pair{as_int(key, std::string(text::trim(part.substr(0, dash)))),
                         as_int(key, std::string(text::trim(part.substr(dash + 1))))};
      }();
      if (a > b) bad(key, v, "ascending ranges");
      for (long long i = a; i <= b; ++i) out.push_back(static_cast<int>(i));
    } else {
      out.push_back(static_cast<int>(as_int(key, part)));
    }
  }
  return out;
}

int as_outcome(const std::string& key, const std::string& v) {
  if (v == "awpri") return 0;
  if (v == "L1") return 1;
  if (v == "L2") return 2;
  if (v == "L3") return 3;
  bad(key, v, "awpri, L1, L2 or L3");
}

std::vector<ArimaOrder> as_grid(const std::string& key, const std::string& v) {
  if (v == "default") return default_grid();
  std::vector<ArimaOrder> grid;
  for (const auto& item : text::split_list(v, ';')) {
    const auto parts = text::split_list(item, ',');
    if (parts.size() != 3) bad(key, v, "'default' or p,d,q;p,d,q...");
    ArimaOrder o{static_cast<int>(as_int(key, parts[0])), static_cast<int>(as_int(key, parts[1])),
                 static_cast<int>(as_int(key, parts[2]))};
    if (o.p < 0 || o.d < 0 || o.q < 0 || o.p > 5 || o.q > 5 || o.d > 2) bad(key, v, "orders p,q <= 5 and d <= 2");
    grid.push_back(o);
  }
  if (grid.empty()) bad(key, v, "a non-empty grid");
  return grid;
}

char as_delimiter(const std::string& key, const std::string& v) {
  if (v == "tab" || v == "\\t" || v == "\t") return '\t';
  if (v.size() == 1 && v != "\"" && v != "\n") return v[0];
  bad(key, v, "a single character or 'tab'");
}

// ---------------------------------------------------------------------------
// Inputs and outputs.

struct Inputs {
  std::optional<PanelDataset> panel;  // imputed and normalized
  std::vector<IndicatorSpec> specs;
  std::optional<ScoreTable> scores;
  std::vector<std::string> warnings;
  std::string digest;

  const ScoreTable& table() const { return *scores; }
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  if (!cfg.scores_input.empty()) {
    const auto text = read_file(cfg.scores_input, "scores input");
    in.digest = fnv1a64_hex(text);
    std::istringstream ss(text);
    in.scores.emplace(read_layer_table(ss, cfg.weights, cfg.thresholds, cfg.delimiter));
    return in;
  }
  if (cfg.input.empty() || cfg.specs.empty()) {
    throw ConfigError("no input: set both input and specs, or scores_input");
  }
  const auto spec_text = read_file(cfg.specs, "indicator specs");
  const auto panel_text = read_file(cfg.input, "panel input");
  in.digest = fnv1a64_hex(spec_text + '\x1f' + panel_text);
  std::istringstream spec_stream(spec_text);
  in.specs = read_indicator_specs(spec_stream);
  validate_specs(in.specs, true);
  std::istringstream panel_stream(panel_text);
  auto loaded = load_panel(panel_stream, in.specs, {cfg.delimiter});
  in.warnings = std::move(loaded.warnings);
  auto imputed = impute_linear(loaded.dataset);
  if (imputed.imputed_cells > 0) {
    in.warnings.push_back("imputed " + std::to_string(imputed.imputed_cells) + " missing cells");
  }
  auto norm = normalize_minmax(imputed.dataset, in.specs);
  in.warnings.insert(in.warnings.end(), norm.warnings.begin(), norm.warnings.end());
  in.panel.emplace(std::move(norm.dataset));
  in.scores.emplace(score_panel(*in.panel, in.specs, cfg.weights, cfg.thresholds));
  return in;
}

int cross_year(const RunConfig& cfg, const ScoreTable& st) {
  const int y = cfg.year.value_or(st.last_year());
  if (y < st.first_year() || y > st.last_year()) {
    throw ConfigError("year " + std::to_string(y) + " is outside the panel (" + std::to_string(st.first_year()) +
                      "-" + std::to_string(st.last_year()) + ")");
  }
  return y;
}

const char* outcome_name(int col) {
  static const char* names[] = {"awpri", "L1", "L2", "L3"};
  return names[col];
}

class Context {
 public:
  Context(const RunConfig& cfg, std::ostream& out, std::string input_digest)
      : cfg_(cfg), out_(out), input_digest_(std::move(input_digest)), dir_(cfg.output_dir) {
    fs::create_directories(dir_);
  }

  const RunConfig& cfg() const { return cfg_; }
  std::ostream& out() { return out_; }
  const std::vector<std::string>& written() const { return written_; }

  std::string banner() const {
    return std::string("# ") + kToolName + " " + kToolVersion + " config=" + cfg_.digest + " input=" + input_digest_ +
           "\n";
  }

  Json meta(const std::string& command) const {
    Json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command;
    m["config_digest"] = cfg_.digest;
    m["input_digest"] = input_digest_;
    m["seed"] = cfg_.seed;
    return m;
  }

  void write_csv(const std::string& name, const std::string& body) { write(name, banner() + body); }

  void write_json(const std::string& name, const std::string& command, const Json& payload) {
    Json doc;
    doc["meta"] = meta(command);
    for (auto it = payload.begin(); it != payload.end(); ++it) doc[it.key()] = it.value();
    write(name, doc.dump(2) + "\n");
  }

 private:
  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << content;
    if (!f) throw ConfigError("failed writing " + path.string());
    if (std::find(written_.begin(), written_.end(), name) == written_.end()) written_.push_back(name);
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::string input_digest_;
  fs::path dir_;
  std::vector<std::string> written_;
};

// Named column of the panel: awpri, L1..L3, trend, or a normalized indicator.
Eigen::VectorXd variable(const Inputs& in, const std::string& name) {
  const auto& st = in.table();
  if (name == "awpri") return st.awpri();
  if (name == "L1" || name == "L2" || name == "L3") return st.layers().col(name[1] - '1');
  if (name == "trend") {
    Eigen::VectorXd t(st.awpri().size());
    for (std::size_t i = 0; i < st.n_countries(); ++i)
      for (int y = st.first_year(); y <= st.last_year(); ++y) t(st.row(i, y)) = y - st.first_year();
    return t;
  }
  if (in.panel) {
    if (const auto k = in.panel->code_index(name)) return in.panel->values().col(static_cast<Eigen::Index>(*k));
  }
  throw ConfigError("unknown variable '" + name + "' (use awpri, L1, L2, L3, trend" +
                    std::string(in.panel ? " or an indicator code" : "") + ")");
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

void run_score(Context& ctx, const Inputs& in) {
  const auto& st = in.table();
  std::ostringstream scores;
  write_scores(scores, st, ctx.cfg().delimiter);
  ctx.write_csv("scores.csv", scores.str());
  const auto trends = trend_slopes(st, 0);
  std::ostringstream tr;
  write_trends_csv(tr, trends, ctx.cfg().delimiter);
  ctx.write_csv("trends.csv", tr.str());

  const int year = st.last_year();
  std::map<Tier, int> counts;
  for (std::size_t i = 0; i < st.n_countries(); ++i) ++counts[st.tiers()[static_cast<std::size_t>(st.row(i, year))]];
  ctx.out() << "score: " << st.n_countries() << " countries, " << st.first_year() << "-" << st.last_year() << "; "
            << year << " tiers:";
  for (Tier t : {Tier::Critical, Tier::High, Tier::Moderate, Tier::Low}) ctx.out() << ' ' << to_string(t) << '=' << counts[t];
  ctx.out() << '\n';
}

void run_cluster(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  const int year = cross_year(cfg, st);
  const Eigen::MatrixXd x = st.cross_section(year);
  KMeansOptions opts;
  opts.n_init = cfg.cluster_n_init;
  const auto sol = kmeans(x, cfg.cluster_k, cfg.seed, opts);
  std::vector<int> ks;
  for (int k : cfg.cluster_k_range)
    if (k >= 1 && k <= x.rows()) ks.push_back(k);
  const auto elbow = elbow_wss(x, ks, cfg.seed, opts);

  Json payload;
  payload["year"] = year;
  payload["features"] = Json::array({"awpri", "L1", "L2", "L3"});
  payload["solution"] = to_json(sol, st.countries());
  Json e = Json::array();
  for (const auto& p : elbow) {
    Json j;
    j["k"] = p.k;
    j["wss"] = p.wss;
    j["silhouette"] = p.silhouette ? Json(*p.silhouette) : Json(nullptr);
    j["calinski_harabasz"] = p.calinski_harabasz ? Json(*p.calinski_harabasz) : Json(nullptr);
    j["davies_bouldin"] = p.davies_bouldin ? Json(*p.davies_bouldin) : Json(nullptr);
    e.push_back(j);
  }
  payload["elbow"] = e;
  ctx.write_json("cluster.json", "cluster", payload);
  std::ostringstream csv;
  write_elbow_csv(csv, elbow, cfg.delimiter);
  ctx.write_csv("elbow.csv", csv.str());
  ctx.out() << "cluster: k=" << sol.k << " wss=" << text::format_double(sol.wss);
  if (sol.silhouette) ctx.out() << " silhouette=" << text::format_double(*sol.silhouette);
  ctx.out() << '\n';
}

void run_pca(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  const int year = cross_year(cfg, st);
  Eigen::MatrixXd x;
  std::vector<std::string> vars;
  if (in.panel) {
    x = in.panel->cross_section(year);
    vars = in.panel->codes();
  } else {
    x = st.cross_section(year).rightCols(3);
    vars = {"L1", "L2", "L3"};
  }
  const auto res = pca(x, vars);
  Json payload;
  payload["year"] = year;
  payload["source"] = in.panel ? "indicators" : "layers";
  payload["pca"] = to_json(res, vars, st.countries());
  ctx.write_json("pca.json", "pca", payload);

  const char d = cfg.delimiter;
  std::ostringstream scores, loadings;
  scores << "country" << d << "component" << d << "score\n";
  for (Eigen::Index i = 0; i < res.scores.rows(); ++i)
    for (Eigen::Index c = 0; c < res.scores.cols(); ++c)
      scores << st.countries()[static_cast<std::size_t>(i)] << d << "PC" << c + 1 << d
             << text::format_double(res.scores(i, c)) << '\n';
  loadings << "variable" << d << "component" << d << "loading\n";
  for (Eigen::Index v = 0; v < res.loadings.rows(); ++v)
    for (Eigen::Index c = 0; c < res.loadings.cols(); ++c)
      loadings << vars[static_cast<std::size_t>(v)] << d << "PC" << c + 1 << d
               << text::format_double(res.loadings(v, c)) << '\n';
  ctx.write_csv("pca_scores.csv", scores.str());
  ctx.write_csv("pca_loadings.csv", loadings.str());
  ctx.out() << "pca: " << vars.size() << " variables, PC1 explains "
            << text::format_double(std::round(res.explained_ratios(0) * 1e4) / 1e2) << "%\n";
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Kruskal-Wallis plus Bonferroni-adjusted pairwise Mann-Whitney tests over
// labelled groups; groups with no members are left out.
Json group_comparison(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                      const RankTestOptions& opts) {
  std::vector<std::pair<std::string, std::vector<double>>> used;
  for (const auto& g : groups)
    if (!g.second.empty()) used.push_back(g);
  Json j;
  Json names = Json::array(), sizes = Json::array();
  std::size_t total = 0;
  for (const auto& g : used) {
    names.push_back(g.first);
    sizes.push_back(g.second.size());
    total += g.second.size();
  }
  j["groups"] = names;
  j["sizes"] = sizes;
  if (used.size() < 2 || total < 3) {
    j["kruskal_wallis"] = nullptr;
    j["note"] = "fewer than two non-empty groups";
    return j;
  }
  std::vector<std::vector<double>> values;
  for (const auto& g : used) values.push_back(g.second);
  j["kruskal_wallis"] = to_json(kruskal_wallis(values));
  std::vector<TestResult> pairs;
  std::vector<double> raw;
  std::vector<std::pair<std::string, std::string>> labels;
  for (std::size_t a = 0; a < used.size(); ++a)
    for (std::size_t b = a + 1; b < used.size(); ++b) {
      pairs.push_back(mann_whitney_u(used[a].second, used[b].second, opts));
      raw.push_back(pairs.back().p_value);
      labels.emplace_back(used[a].first, used[b].first);
    }
  const auto adj = bonferroni(raw);
  Json pw = Json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Json r;
    r["a"] = labels[i].first;
    r["b"] = labels[i].second;
    r["result"] = to_json(pairs[i]);
    r["p_bonferroni"] = adj[i];
    pw.push_back(r);
  }
  j["pairwise"] = pw;
  return j;
}

void run_tests(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  const int year = cross_year(cfg, st);
  RankTestOptions opts;
  opts.continuity_correction = cfg.tests_continuity;

  Json payload;
  payload["year"] = year;
  payload["continuity_correction"] = cfg.tests_continuity;
  Json desc, desc_year;
  const Eigen::MatrixX4d cs = st.cross_section(year);
  for (int c = 0; c < 4; ++c) {
    const auto all = to_std(st.outcome(c));
    desc[outcome_name(c)] = to_json(describe(all));
    const auto yr = to_std(cs.col(c));
    desc_year[outcome_name(c)] = to_json(describe(yr));
  }
  payload["descriptives_panel"] = desc;
  payload["descriptives_year"] = desc_year;

  Json wil = Json::array();
  for (auto [a, b] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{2, 1}}) {
    Json r;
    r["x"] = outcome_name(a);
    r["y"] = outcome_name(b);
    const auto xa = to_std(st.outcome(a)), xb = to_std(st.outcome(b));
    try {
      r["result"] = to_json(wilcoxon_signed_rank(xa, xb, opts));
    } catch (const NumericalError& e) {
      r["result"] = nullptr;
      r["note"] = e.what();
    }
    wil.push_back(r);
  }
  payload["wilcoxon"] = wil;

  std::vector<std::pair<std::string, std::vector<double>>> by_tier;
  for (Tier t : {Tier::Critical, Tier::High, Tier::Moderate, Tier::Low}) by_tier.emplace_back(to_string(t), std::vector<double>{});
  for (std::size_t i = 0; i < st.n_countries(); ++i) {
    const auto r = st.row(i, year);
    by_tier[static_cast<std::size_t>(st.tiers()[static_cast<std::size_t>(r)])].second.push_back(st.awpri()(r));
  }
  payload["tiers"] = group_comparison(by_tier, opts);

  if (in.panel) {
    std::vector<std::pair<std::string, std::vector<double>>> by_income;
    for (IncomeGroup g : {IncomeGroup::high, IncomeGroup::upper_middle, IncomeGroup::lower_middle, IncomeGroup::low})
      by_income.emplace_back(to_string(g), std::vector<double>{});
    for (std::size_t i = 0; i < st.n_countries(); ++i) {
      const auto g = in.panel->countries()[i].income_group;
      if (g == IncomeGroup::unknown) continue;
      by_income[static_cast<std::size_t>(g) - 1].second.push_back(st.awpri()(st.row(i, year)));
    }
    payload["income_groups"] = group_comparison(by_income, opts);
  }

  Eigen::MatrixXd sx;
  std::vector<std::string> vars;
  if (in.panel) {
    sx = in.panel->cross_section(year);
    vars = in.panel->codes();
  } else {
    sx = cs;
    vars = {"awpri", "L1", "L2", "L3"};
  }
  if (sx.rows() >= 2) payload["spearman"] = to_json(spearman_matrix(sx), vars);
  ctx.write_json("tests.json", "tests", payload);
  ctx.out() << "tests: wilcoxon x3, tier comparison over " << st.n_countries() << " countries in " << year << '\n';
}

std::vector<std::string> resolve_treated(const RunConfig& cfg, const Inputs& in) {
  if (!cfg.did_treated.empty()) return cfg.did_treated;
  if (in.panel && !cfg.did_treat_code.empty()) {
    return treated_by_rule(*in.panel, cfg.did_treat_code, cfg.did_treat_year, cfg.did_treat_threshold);
  }
  throw ConfigError("DiD needs a treated set: set did.treated, or give a raw panel with did.treat_code");
}

DidSpec did_spec(const RunConfig& cfg, std::vector<std::string> treated) {
  DidSpec s;
  s.treated = std::move(treated);
  s.pre_first = cfg.did_pre_first;
  s.pre_last = cfg.did_pre_last;
  s.post_first = cfg.did_post_first;
  s.post_last = cfg.did_post_last;
  s.excluded = cfg.did_excluded;
  s.outcome = cfg.did_outcome;
  return s;
}

void run_did(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  const auto spec = did_spec(cfg, resolve_treated(cfg, in));
  const auto res = did(st, spec);

  Json payload;
  payload["outcome"] = outcome_name(cfg.did_outcome);
  payload["did"] = to_json(res);
  const int pre_lo = std::max(cfg.did_pre_first, st.first_year());
  const int pre_hi = std::min(cfg.did_pre_last, st.last_year());
  if (pre_hi - pre_lo + 1 >= 3) {
    payload["pretrend"] = to_json(pretrend_test(st, res.treated, pre_lo, pre_hi, cfg.did_outcome));
  } else {
    payload["pretrend"] = nullptr;
  }
  ctx.write_json("did.json", "did", payload);

  // Group means for every panel year.
  const std::set<std::string> treated(res.treated.begin(), res.treated.end());
  const Eigen::VectorXd y = st.outcome(cfg.did_outcome);
  const char d = cfg.delimiter;
  std::ostringstream csv;
  csv << "year" << d << "group" << d << "mean" << d << "n\n";
  for (int year = st.first_year(); year <= st.last_year(); ++year) {
    for (const char* group : {"treated", "control"}) {
      double sum = 0.0;
      int n = 0;
      for (std::size_t i = 0; i < st.n_countries(); ++i) {
        if (treated.count(st.countries()[i]) != (group[0] == 't' ? 1u : 0u)) continue;
        sum += y(st.row(i, year));
        ++n;
      }
      csv << year << d << group << d << text::format_double(sum / n) << d << n << '\n';
    }
  }
  ctx.write_csv("did_groups.csv", csv.str());
  ctx.out() << "did: beta=" << text::format_double(res.att) << " se=" << text::format_double(res.se)
            << " raw=" << text::format_double(res.raw_did) << " treated=" << res.treated.size()
            << " control=" << res.control.size() << '\n';
}

void run_hausman(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  if (cfg.hausman_regressors.empty()) {
    throw ConfigError("hausman.regressors is empty; list the time-varying regressors to compare");
  }
  const auto& st = in.table();
  const Eigen::VectorXd y = variable(in, cfg.hausman_outcome);
  Eigen::MatrixXd x(y.size(), static_cast<Eigen::Index>(cfg.hausman_regressors.size()));
  for (std::size_t j = 0; j < cfg.hausman_regressors.size(); ++j) {
    if (cfg.hausman_regressors[j] == cfg.hausman_outcome) throw ConfigError("hausman outcome is also a regressor");
    x.col(static_cast<Eigen::Index>(j)) = variable(in, cfg.hausman_regressors[j]);
  }
  std::vector<int> entity, time;
  for (std::size_t i = 0; i < st.n_countries(); ++i)
    for (int t = 0; t < st.n_years(); ++t) {
      entity.push_back(static_cast<int>(i));
      time.push_back(t);
    }
  FeOptions fo;
  fo.time_effects = cfg.hausman_time_effects;
  const auto fe = fe_within(y, x, entity, time, fo, cfg.hausman_regressors);
  const auto re = re_gls(y, x, entity, cfg.hausman_regressors);
  const auto h = hausman(fe, re.fit);
  Json payload;
  payload["outcome"] = cfg.hausman_outcome;
  payload["regressors"] = cfg.hausman_regressors;
  payload["fe_time_effects"] = cfg.hausman_time_effects;
  payload["fixed_effects"] = to_json(fe);
  payload["random_effects"] = to_json(re);
  payload["hausman"] = to_json(h);
  ctx.write_json("hausman.json", "hausman", payload);
  ctx.out() << "hausman: H=" << text::format_double(h.statistic) << " df=" << h.df
            << " p=" << text::format_double(h.p_value) << (h.pseudo_inverse ? " (pseudo-inverse)" : "") << '\n';
}

void run_forecast(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  ArimaOptions opts;
  opts.include_drift = cfg.forecast_drift;
  const Eigen::VectorXd y = st.outcome(cfg.forecast_outcome);
  std::vector<ForecastRow> rows;
  Json countries = Json::array();
  for (std::size_t i = 0; i < st.n_countries(); ++i) {
    const auto series = to_std(y.segment(st.row(i, st.first_year()), st.n_years()));
    Json c;
    c["country"] = st.countries()[i];
    try {
      const auto sel = select_order(series, cfg.forecast_grid, opts);
      c["model"] = to_json(sel.best);
      Json cands = Json::array();
      for (const auto& cand : sel.candidates) {
        Json k;
        k["order"] = Json::array({cand.order.p, cand.order.d, cand.order.q});
        k["aic"] = cand.model ? Json(cand.model->aic) : Json(nullptr);
        k["converged"] = cand.model ? cand.model->converged : false;
        if (!cand.note.empty()) k["note"] = cand.note;
        cands.push_back(k);
      }
      c["candidates"] = cands;
      rows.push_back({st.countries()[i], sel.best.order, st.last_year() + 1,
                      forecast(sel.best, series, cfg.forecast_horizon, cfg.forecast_level)});
    } catch (const NumericalError& e) {
      c["model"] = nullptr;
      c["note"] = e.what();
    } catch (const DataError& e) {
      c["model"] = nullptr;
      c["note"] = e.what();
    }
    countries.push_back(c);
  }
  if (rows.empty()) throw NumericalError("no country series could be fitted");
  Json payload;
  payload["outcome"] = outcome_name(cfg.forecast_outcome);
  payload["horizon"] = cfg.forecast_horizon;
  payload["level"] = cfg.forecast_level;
  payload["drift"] = cfg.forecast_drift;
  payload["countries"] = countries;
  ctx.write_json("forecast.json", "forecast", payload);
  std::ostringstream csv;
  write_forecast_csv(csv, rows, cfg.delimiter);
  ctx.write_csv("forecast.csv", csv.str());
  ctx.out() << "forecast: " << rows.size() << " of " << st.n_countries() << " countries, horizon "
            << cfg.forecast_horizon << '\n';
}

void run_sensitivity(Context& ctx, const Inputs& in) {
  const auto& cfg = ctx.cfg();
  const auto& st = in.table();
  const int year = cross_year(cfg, st);
  const auto grid = weight_grid(cfg.weights, cfg.sens_step, cfg.sens_tol);
  SensitivityOptions opts;
  opts.tiers = cfg.sens_tiers;
  opts.k = cfg.cluster_k;
  opts.seed = cfg.seed;
  opts.n_init = cfg.cluster_n_init;
  const auto rep = sensitivity_report(st, year, grid, cfg.weights, opts);
  Json payload;
  payload["step"] = cfg.sens_step;
  payload["tol"] = cfg.sens_tol;
  payload["report"] = to_json(rep);
  ctx.write_json("sensitivity.json", "sensitivity", payload);
  std::ostringstream csv;
  write_sensitivity_csv(csv, rep, cfg.delimiter);
  ctx.write_csv("sensitivity.csv", csv.str());
  ctx.out() << "sensitivity: " << rep.entries.size() << " weightings, mean rho=" << text::format_double(rep.mean_rho)
            << " mean ari=" << text::format_double(rep.mean_ari) << '\n';
}

template <typename F>
void with_inputs(const RunConfig& cfg, std::ostream& out, F&& body) {
  const auto in = load_inputs(cfg);
  for (const auto& w : in.warnings) out << "warning: " << w << '\n';
  Context ctx(cfg, out, in.digest);
  body(ctx, in);
}

Json truth_json(const SynthTruth& t) {
  Json j;
  j["version"] = t.version;
  j["seed"] = t.seed;
  j["countries"] = t.countries;
  j["first_year"] = t.first_year;
  j["n_years"] = t.n_years;
  j["base_level"] = t.base_level;
  auto vec = [](const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  j["country_effects"] = vec(t.country_effects);
  j["year_effects"] = vec(t.year_effects);
  j["trends"] = vec(t.trends);
  j["treated"] = t.treated;
  j["post_first"] = t.post_first;
  j["att"] = t.att;
  j["noise_sd"] = t.noise_sd;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::map<std::string, std::string>& default_settings() {
  static const std::map<std::string, std::string> d{
      {"input", ""},
      {"specs", ""},
      {"scores_input", ""},
      {"delimiter", ","},
      {"output_dir", "awpri_out"},
      {"seed", "42"},
      {"weights", "equal"},
      {"thresholds", "0.55,0.45,0.35"},
      {"year", ""},
      {"cluster.k", "4"},
      {"cluster.k_range", "1-10"},
      {"cluster.n_init", "50"},
      {"tests.continuity_correction", "true"},
      {"did.treated", ""},
      {"did.treat_code", "ai_governance_risk"},
      {"did.treat_year", "2019"},
      {"did.treat_threshold", "1"},
      {"did.pre", "2004-2016"},
      {"did.post", "2019-2022"},
      {"did.excluded", "2017,2018"},
      {"did.outcome", "awpri"},
      {"hausman.outcome", "awpri"},
      {"hausman.regressors", ""},
      {"hausman.time_effects", "false"},
      {"forecast.grid", "default"},
      {"forecast.horizon", "8"},
      {"forecast.level", "0.95"},
      {"forecast.drift", "true"},
      {"forecast.outcome", "awpri"},
      {"sensitivity.step", "0.05"},
      {"sensitivity.tol", "0.10"},
      {"sensitivity.tiers", "thresholds"},
      {"synth.kind", "scores"},
      {"synth.countries", "25"},
      {"synth.first_year", "2004"},
      {"synth.last_year", "2022"},
      {"synth.base_level", "0.45"},
      {"synth.country_effect_sd", "0.05"},
      {"synth.year_effect_sd", "0.01"},
      {"synth.trend_sd", "0"},
      {"synth.att", "0.05"},
      {"synth.noise_sd", "0.01"},
      {"synth.treated", "14"},
      {"synth.post_first", "2019"},
      {"synth.clamp", "true"},
      {"synth.missing_rate", "0"},
  };
  return d;
}

RunConfig resolve_config(const std::optional<std::string>& config_path,
                         const std::map<std::string, std::string>& overrides) {
  auto settings = default_settings();
  auto set = [&](const std::string& key, const std::string& value, const std::string& where) {
    const auto it = settings.find(key);
    if (it == settings.end()) throw ConfigError("unknown setting '" + key + "'" + where);
    it->second = std::string(text::trim(value));
  };
  if (config_path) {
    const auto kv = KvFile::load(*config_path);
    for (const auto& e : kv.entries()) {
      set(e.section.empty() ? e.key : e.section + "." + e.key, e.value,
          " in " + *config_path + " line " + std::to_string(e.line));
    }
  }
  for (const auto& [k, v] : overrides) set(k, v, "");

  RunConfig c;
  const auto& s = settings;
  auto get = [&](const char* key) -> const std::string& { return s.at(key); };
  c.input = get("input");
  c.specs = get("specs");
  c.scores_input = get("scores_input");
  c.delimiter = as_delimiter("delimiter", get("delimiter"));
  c.output_dir = get("output_dir");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  {
    const auto seed = as_int("seed", get("seed"));
    if (seed < 0) bad("seed", get("seed"), "a non-negative integer");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  if (get("weights") != "equal") {
    const auto parts = text::split_list(get("weights"));
    if (parts.size() != 3) bad("weights", get("weights"), "'equal' or w1,w2,w3");
    c.weights = LayerWeights(as_double("weights", parts[0]), as_double("weights", parts[1]),
                             as_double("weights", parts[2]));
  }
  {
    const auto parts = text::split_list(get("thresholds"));
    if (parts.size() != 3) bad("thresholds", get("thresholds"), "critical,high,moderate");
    c.thresholds = {as_double("thresholds", parts[0]), as_double("thresholds", parts[1]),
                    as_double("thresholds", parts[2])};
    c.thresholds.validate();
  }
  if (!get("year").empty()) c.year = as_year("year", get("year"));

  c.cluster_k = static_cast<int>(as_int("cluster.k", get("cluster.k")));
  if (c.cluster_k < 1) bad("cluster.k", get("cluster.k"), "k >= 1");
  c.cluster_k_range = as_int_list("cluster.k_range", get("cluster.k_range"));
  for (int k : c.cluster_k_range)
    if (k < 1) bad("cluster.k_range", get("cluster.k_range"), "values >= 1");
  c.cluster_n_init = static_cast<int>(as_int("cluster.n_init", get("cluster.n_init")));
  if (c.cluster_n_init < 1) bad("cluster.n_init", get("cluster.n_init"), "n_init >= 1");

  c.tests_continuity = as_bool("tests.continuity_correction", get("tests.continuity_correction"));

  c.did_treated = text::split_list(get("did.treated"));
  c.did_treat_code = get("did.treat_code");
  c.did_treat_year = as_year("did.treat_year", get("did.treat_year"));
  c.did_treat_threshold = as_double("did.treat_threshold", get("did.treat_threshold"));
  std::tie(c.did_pre_first, c.did_pre_last) = as_year_range("did.pre", get("did.pre"));
  std::tie(c.did_post_first, c.did_post_last) = as_year_range("did.post", get("did.post"));
  if (!get("did.excluded").empty() && get("did.excluded") != "none") {
    c.did_excluded = as_int_list("did.excluded", get("did.excluded"));
  }
  c.did_outcome = as_outcome("did.outcome", get("did.outcome"));

  c.hausman_outcome = get("hausman.outcome");
  c.hausman_regressors = text::split_list(get("hausman.regressors"));
  c.hausman_time_effects = as_bool("hausman.time_effects", get("hausman.time_effects"));

  c.forecast_grid = as_grid("forecast.grid", get("forecast.grid"));
  c.forecast_horizon = static_cast<int>(as_int("forecast.horizon", get("forecast.horizon")));
  if (c.forecast_horizon < 1) bad("forecast.horizon", get("forecast.horizon"), "horizon >= 1");
  c.forecast_level = as_double("forecast.level", get("forecast.level"));
  if (!(c.forecast_level > 0.0 && c.forecast_level < 1.0)) bad("forecast.level", get("forecast.level"), "a level in (0, 1)");
  c.forecast_drift = as_bool("forecast.drift", get("forecast.drift"));
  c.forecast_outcome = as_outcome("forecast.outcome", get("forecast.outcome"));

  c.sens_step = as_double("sensitivity.step", get("sensitivity.step"));
  c.sens_tol = as_double("sensitivity.tol", get("sensitivity.tol"));
  if (get("sensitivity.tiers") == "thresholds") c.sens_tiers = TierSource::thresholds;
  else if (get("sensitivity.tiers") == "kmeans") c.sens_tiers = TierSource::kmeans;
  else bad("sensitivity.tiers", get("sensitivity.tiers"), "thresholds or kmeans");

  c.synth_kind = get("synth.kind");
  if (c.synth_kind != "scores" && c.synth_kind != "panel") bad("synth.kind", c.synth_kind, "scores or panel");
  {
    const auto n = as_int("synth.countries", get("synth.countries"));
    if (n < 2) bad("synth.countries", get("synth.countries"), "at least 2");
    c.synth_countries = static_cast<std::size_t>(n);
    const auto t = as_int("synth.treated", get("synth.treated"));
    if (t < 0) bad("synth.treated", get("synth.treated"), "a non-negative count");
    c.synth_treated = static_cast<std::size_t>(t);
  }
  c.synth_first_year = as_year("synth.first_year", get("synth.first_year"));
  c.synth_last_year = as_year("synth.last_year", get("synth.last_year"));
  c.synth_base_level = as_double("synth.base_level", get("synth.base_level"));
  c.synth_country_sd = as_double("synth.country_effect_sd", get("synth.country_effect_sd"));
  c.synth_year_sd = as_double("synth.year_effect_sd", get("synth.year_effect_sd"));
  c.synth_trend_sd = as_double("synth.trend_sd", get("synth.trend_sd"));
  c.synth_att = as_double("synth.att", get("synth.att"));
  c.synth_noise_sd = as_double("synth.noise_sd", get("synth.noise_sd"));
  c.synth_post_first = as_year("synth.post_first", get("synth.post_first"));
  c.synth_clamp = as_bool("synth.clamp", get("synth.clamp"));
  c.synth_missing_rate = as_double("synth.missing_rate", get("synth.missing_rate"));
  if (c.synth_missing_rate < 0.0 || c.synth_missing_rate >= 1.0) {
    bad("synth.missing_rate", get("synth.missing_rate"), "a rate in [0, 1)");
  }

  for (const auto& [k, v] : settings) {
    if (k == "output_dir" || k == "input" || k == "specs" || k == "scores_input") continue;
    c.canonical += k + " = " + v + "\n";
  }
  c.digest = fnv1a64_hex(c.canonical);
  return c;
}

void cmd_score(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_score); }
void cmd_cluster(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_cluster); }
void cmd_pca(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_pca); }
void cmd_tests(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_tests); }
void cmd_did(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_did); }
void cmd_hausman(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_hausman); }
void cmd_forecast(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_forecast); }
void cmd_sensitivity(const RunConfig& cfg, std::ostream& out) { with_inputs(cfg, out, run_sensitivity); }

// Shortest series the report still hands to ARIMA order selection.
constexpr int kMinForecastYears = 5;

void cmd_report(const RunConfig& cfg, std::ostream& out) {
  with_inputs(cfg, out, [&](Context& ctx, const Inputs& in) {
    Json skipped = Json::array();
    auto skip = [&](const char* command, const std::string& why) {
      Json s;
      s["command"] = command;
      s["reason"] = why;
      skipped.push_back(s);
      ctx.out() << command << ": skipped (" << why << ")\n";
    };
    run_score(ctx, in);
    run_tests(ctx, in);
    run_cluster(ctx, in);
    run_pca(ctx, in);
    const auto& st = in.table();
    const bool windows_fit = std::min(cfg.did_pre_first, cfg.did_post_first) >= st.first_year() &&
                             std::max(cfg.did_pre_last, cfg.did_post_last) <= st.last_year();
    if (cfg.did_treated.empty() && !(in.panel && !cfg.did_treat_code.empty())) {
      skip("did", "no treated set configured");
    } else if (!windows_fit) {
      skip("did", "pre/post windows lie outside the panel years");
    } else {
      run_did(ctx, in);
    }
    if (cfg.hausman_regressors.empty()) {
      skip("hausman", "hausman.regressors not configured");
    } else if (st.n_years() < 2) {
      skip("hausman", "needs at least two panel years");
    } else {
      run_hausman(ctx, in);
    }
    if (st.n_years() < kMinForecastYears) {
      skip("forecast", "fewer than " + std::to_string(kMinForecastYears) + " panel years");
    } else {
      run_forecast(ctx, in);
    }
    run_sensitivity(ctx, in);
    Json payload;
    payload["outputs"] = ctx.written();
    payload["skipped"] = skipped;
    payload["settings"] = Json::object();
    std::istringstream lines(cfg.canonical);
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find(" = ");
      payload["settings"][line.substr(0, eq)] = line.substr(eq + 3);
    }
    ctx.write_json("report.json", "report", payload);
  });
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
  if (cfg.synth_kind == "panel") {
    if (cfg.specs.empty()) throw ConfigError("synth.kind = panel needs an indicator spec file (specs)");
    const auto spec_text = read_file(cfg.specs, "indicator specs");
    std::istringstream ss(spec_text);
    const auto specs = read_indicator_specs(ss);
    validate_specs(specs, false);
    Context ctx(cfg, out, fnv1a64_hex(spec_text));
    if (cfg.synth_last_year < cfg.synth_first_year) throw ConfigError("synth.last_year precedes synth.first_year");
    const auto ds = generate_indicator_panel(cfg.synth_countries, cfg.synth_first_year, cfg.synth_last_year, specs,
                                             cfg.seed, cfg.synth_missing_rate);
    std::ostringstream csv;
    write_panel(csv, ds, cfg.delimiter);
    ctx.write_csv("synth_panel.csv", csv.str());
    out << "synth: indicator panel " << ds.n_countries() << " x " << ds.n_years() << ", " << ds.missing_count()
        << " missing cells\n";
    return;
  }
  Context ctx(cfg, out, fnv1a64_hex(""));
  SynthConfig sc;
  sc.seed = cfg.seed;
  sc.base_level = cfg.synth_base_level;
  sc.country_effect_sd = cfg.synth_country_sd;
  sc.year_effect_sd = cfg.synth_year_sd;
  sc.trend_sd = cfg.synth_trend_sd;
  sc.att = cfg.synth_att;
  sc.noise_sd = cfg.synth_noise_sd;
  sc.n_treated = cfg.synth_treated;
  sc.post_first = cfg.synth_post_first;
  sc.clamp = cfg.synth_clamp;
  const auto sp = generate_panel(cfg.synth_countries, cfg.synth_first_year, cfg.synth_last_year, sc);
  std::ostringstream csv;
  write_scores(csv, sp.scores, cfg.delimiter);
  ctx.write_csv("synth_scores.csv", csv.str());
  Json payload;
  payload["truth"] = truth_json(sp.truth);
  ctx.write_json("synth_truth.json", "synth", payload);
  out << "synth: score panel " << sp.scores.n_countries() << " x " << sp.scores.n_years() << ", "
      << sp.truth.treated.size() << " treated\n";
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Composite policy-risk index toolkit: scoring, clustering, panel econometrics, forecasting"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.fallthrough(false);

  std::optional<std::string> config_path;
  std::map<std::string, std::string> overrides;

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const std::vector<Flag> common{
      {"--input,-i", "input", "raw indicator panel (delimited text)"},
      {"--specs", "specs", "indicator spec file"},
      {"--scores-input", "scores_input", "layer table (country,year,L1,L2,L3) instead of a raw panel"},
      {"--delimiter", "delimiter", "field delimiter for inputs and outputs (',' default, 'tab')"},
      {"--output-dir,-o", "output_dir", "directory for output files"},
      {"--seed", "seed", "random seed"},
      {"--weights", "weights", "layer weights w1,w2,w3 or 'equal'"},
      {"--thresholds", "thresholds", "tier lower bounds critical,high,moderate"},
      {"--year", "year", "cross-section year (default: last panel year)"},
  };
  const std::map<std::string, std::vector<Flag>> specific{
      {"cluster",
       {{"--k", "cluster.k", "number of clusters"},
        {"--k-range", "cluster.k_range", "k values for the elbow table, e.g. 1-10"},
        {"--n-init", "cluster.n_init", "k-means restarts"}}},
      {"tests", {{"--continuity-correction", "tests.continuity_correction", "true or false"}}},
      {"did",
       {{"--treated", "did.treated", "comma-separated treated country ids"},
        {"--treat-code", "did.treat_code", "indicator used by the treatment rule"},
        {"--treat-year", "did.treat_year", "year the treatment rule is evaluated"},
        {"--treat-threshold", "did.treat_threshold", "normalized value at or above which a country is treated"},
        {"--pre", "did.pre", "pre window FIRST-LAST"},
        {"--post", "did.post", "post window FIRST-LAST"},
        {"--excluded", "did.excluded", "excluded years, or 'none'"},
        {"--outcome", "did.outcome", "awpri, L1, L2 or L3"}}},
      {"hausman",
       {{"--outcome", "hausman.outcome", "dependent variable"},
        {"--regressors", "hausman.regressors", "comma-separated regressors"},
        {"--time-effects", "hausman.time_effects", "add time effects to the FE fit (true/false)"}}},
      {"forecast",
       {{"--grid", "forecast.grid", "'default' or p,d,q;p,d,q..."},
        {"--horizon", "forecast.horizon", "forecast steps"},
        {"--level", "forecast.level", "interval level"},
        {"--drift", "forecast.drift", "drift term for d = 1 (true/false)"},
        {"--outcome", "forecast.outcome", "awpri, L1, L2 or L3"}}},
      {"sensitivity",
       {{"--step", "sensitivity.step", "weight lattice step"},
        {"--tol", "sensitivity.tol", "maximum weight shift"},
        {"--tiers", "sensitivity.tiers", "thresholds or kmeans"},
        {"--k", "cluster.k", "clusters when tiers = kmeans"},
        {"--n-init", "cluster.n_init", "k-means restarts when tiers = kmeans"}}},
      {"synth",
       {{"--kind", "synth.kind", "scores or panel"},
        {"--countries", "synth.countries", "number of countries"},
        {"--first-year", "synth.first_year", "first year"},
        {"--last-year", "synth.last_year", "last year"},
        {"--att", "synth.att", "injected treatment effect"},
        {"--noise-sd", "synth.noise_sd", "noise standard deviation"},
        {"--treated-count", "synth.treated", "number of treated countries"},
        {"--post-first", "synth.post_first", "first post-treatment year"},
        {"--missing-rate", "synth.missing_rate", "share of blank cells (panel kind)"}}},
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"score", "layer scores, composite, tiers and per-country trends"},
      {"cluster", "k-means on the (awpri, L1, L2, L3) cross-section, elbow table"},
      {"pca", "principal components of the standardized cross-section"},
      {"tests", "descriptives and rank tests"},
      {"did", "difference-in-differences with pre-trend test"},
      {"hausman", "fixed vs random effects comparison"},
      {"forecast", "per-country ARIMA selection and forecasts"},
      {"sensitivity", "layer-weight perturbation analysis"},
      {"report", "run every analysis"},
      {"synth", "generate a synthetic panel with recorded truth"},
  };

  std::string chosen;
  std::vector<std::string> sets;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, name = name] { chosen = name; });
    sub->add_option("--config,-c", config_path, "key-value config file");
    sub->add_option("--set", sets, "override any setting, e.g. --set did.pre=2004-2016")->allow_extra_args(false);
    auto bind = [&](const Flag& f) {
      const std::string key = f.key;
      sub->add_option_function<std::string>(f.name, [&overrides, key](const std::string& v) { overrides[key] = v; },
                                             f.help);
    };
    for (const auto& f : common) bind(f);
    if (name == "report") {
      std::set<std::string> seen;
      std::map<std::string, int> uses;
      for (const auto& [cmd, flags] : specific)
        if (cmd != "synth")
          for (const auto& f : flags) ++uses[f.name];
      for (const auto& [cmd, flags] : specific) {
        if (cmd == "synth") continue;
        for (const auto& f : flags) {
          // Flags shared by several analyses with different meanings stay --set only.
          if (uses[f.name] > 1 && std::string(f.name) != "--k" && std::string(f.name) != "--n-init") continue;
          if (seen.insert(f.name).second) bind(f);
        }
      }
    } else if (const auto it = specific.find(name); it != specific.end()) {
      for (const auto& f : it->second) bind(f);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
      overrides[std::string(text::trim(s.substr(0, eq)))] = s.substr(eq + 1);
    }
    const auto cfg = resolve_config(config_path, overrides);
    static const std::map<std::string, void (*)(const RunConfig&, std::ostream&)> dispatch{
        {"score", cmd_score},     {"cluster", cmd_cluster},   {"pca", cmd_pca},
        {"tests", cmd_tests},     {"did", cmd_did},           {"hausman", cmd_hausman},
        {"forecast", cmd_forecast}, {"sensitivity", cmd_sensitivity}, {"report", cmd_report},
        {"synth", cmd_synth},
    };
    dispatch.at(chosen)(cfg, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace awpri::app
