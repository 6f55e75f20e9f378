#include "denslab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace denslab {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_keys(const Json& j, const std::vector<std::string>& allowed,
                const std::string& context) {
  require(j.is_object(), context + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed) known = known || it.key() == k;
    require(known, "unknown key '" + it.key() + "' in " + context);
  }
}

double num_or(const Json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_number(), "'" + key + "' must be a number");
  return j.at(key).get<double>();
}

int int_or(const Json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_number_integer(), "'" + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string str_or(const Json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  require(j.at(key).is_string(), "'" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

ScalarField parse_checked(const std::string& expr, const std::string& context) {
  try {
    return parse_expression(expr);
  } catch (const std::exception& e) {
    throw ConfigError(context + ": cannot parse '" + expr + "': " + e.what());
  }
}

Domain domain_from(const Json& d) {
  if (d.is_string()) {
    std::string s = d.get<std::string>();
    if (s == "whole_line") return Domain::whole_line();
    if (s == "half_line") return Domain::half_line();
    throw ConfigError("space.domain string must be 'whole_line' or 'half_line'");
  }
  require(d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number(),
          "space.domain must be 'whole_line', 'half_line', or [lo, hi]");
  double lo = d[0].get<double>(), hi = d[1].get<double>();
  require(lo < hi, "space.domain interval needs lo < hi");
  return Domain::interval(lo, hi);
}

bool is_half_line(const Json& d) { return d.is_string() && d.get<std::string>() == "half_line"; }

struct BuiltConfig {
  SpaceKind kind = SpaceKind::Lp;
  SpaceSpec space;
  ScalarField f0;
  std::string weight_preset;  // empty for expression weights
  double weight_param = 0.0;
  MapPhi phi;
};

ScalarField build_weight(const Json& w) {
  if (w.contains("preset"))
    return preset_weight(w.at("preset").get<std::string>(), num_or(w, "param", 0.0)).field;
  return parse_checked(w.at("expression").get<std::string>(), "weight.expression");
}

BuiltConfig build_objects(const Json& cfg) {
  BuiltConfig b;
  const Json& sp = cfg.at("space");
  std::string kind = sp.at("kind").get<std::string>();
  b.kind = kind == "lp" ? SpaceKind::Lp : (kind == "cm" ? SpaceKind::Cm : SpaceKind::Schwartz);

  SpaceParams params;
  params.domain = domain_from(sp.at("domain"));
  params.p = num_or(sp, "p", 0.0);
  params.m = int_or(sp, "m", 0);
  params.k_max = int_or(sp, "k_max", 0);
  params.N_max = int_or(sp, "N_max", 0);
  params.alpha_max = int_or(sp, "alpha_max", -1);
  params.quad_order = int_or(sp, "quad_order", 16);
  params.tail.radius = num_or(sp, "tail_radius", 40.0);
  params.sup_radius = num_or(sp, "sup_radius", 20.0);
  if (sp.contains("quad")) {
    std::string q = sp.at("quad").get<std::string>();
    if (q == "gauss_legendre")
      params.quad = QuadratureKind::GaussLegendreComposite;
    else if (q == "tanh_sinh")
      params.quad = QuadratureKind::TanhSinh;
    else
      throw ConfigError("space.quad must be 'gauss_legendre' or 'tanh_sinh'");
  }
  if (sp.contains("density"))
    params.measure = MeasureSpec(parse_checked(sp.at("density").get<std::string>(),
                                               "space.density"));
  try {
    b.space = make_space(b.kind, params);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("space: ") + e.what());
  }

  const Json& w = cfg.at("weight");
  b.f0 = build_weight(w);
  b.weight_preset = str_or(w, "preset", "");
  b.weight_param = num_or(w, "param", 0.0);

  PhiSpec ps;
  const Json& ph = cfg.at("phi");
  ps.preset = str_or(ph, "preset", "identity");
  ps.a = num_or(ph, "a", 1.0);
  ps.b = num_or(ph, "b", 0.0);
  ps.dim = int_or(ph, "dim", 1);
  try {
    b.phi = make_phi(ps);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("phi: ") + e.what());
  }
  return b;
}

bool has_check(const Json& cfg, const std::string& name) {
  for (const auto& c : cfg.at("checks"))
    if (c.get<std::string>() == name) return true;
  return false;
}

// rule smooth-weight-for-sup: C^m / Schwartz seminorm pipelines differentiate
// the weight; reject weights without derivative access up front.
void check_sup_weight_rule(const BuiltConfig& b, const Json& cfg) {
  if (std::isfinite(b.space.p)) return;
  std::string desc = cfg.at("weight").contains("preset")
                         ? cfg.at("weight").at("preset").get<std::string>()
                         : cfg.at("weight").at("expression").get<std::string>();
  bool ok = b.f0.is_smooth();
  if (ok) {
    Vec x = Vec::Constant(b.space.domain.dim(), 0.25);
    if (!b.space.domain.contains(x)) x = 0.5 * (b.space.sup_box(1).lo + b.space.sup_box(1).hi);
    try {
      b.f0.jet(x, 1);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  require(ok, "rule smooth-weight-for-sup: C^m/Schwartz spaces need a smoothly "
              "differentiable weight, but '" +
                  desc + "' is not");
}

const std::vector<std::string> kChecks = {"admissibility", "decay",   "density",
                                          "lemma212",      "prop210", "closure"};
const std::vector<std::string> kCriteria = {
    "max_final_error",    "strictly_decreasing",    "expect_outcome",
    "expect_admissible",  "min_epsilon",            "max_residual",
    "residual_drop_factor", "max_relative_error",   "max_complex_step_error",
    "max_witness_pairing", "min_target_pairing",    "require_consistent",
    "max_closure_error"};

std::string outcome_name(DensityOutcome o) {
  switch (o) {
    case DensityOutcome::DenseConsistent: return "dense_consistent";
    case DensityOutcome::ObstructionFound: return "obstruction_found";
    default: return "inconclusive";
  }
}

Json table_json(const std::vector<DecayPoint>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(Json::array({r.size, r.error}));
  return out;
}

bool strictly_decreasing(const std::vector<DecayPoint>& rows) {
  for (size_t i = 0; i + 1 < rows.size(); ++i)
    if (!(rows[i + 1].error < rows[i].error)) return false;
  return true;
}

double stage_seconds(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("DENSITY_LAB_THREADS");
  if (!env) return hw;
  int v = std::atoi(env);
  return std::max(1, std::min(v > 0 ? v : 1, hw));
}

Json validate_config(const Json& raw) {
  check_keys(raw, {"schema_version", "name", "seed", "space", "weight", "phi", "family",
                   "targets", "checks", "epsilon_grid", "pass_criteria", "lemma212",
                   "prop210", "closure", "probe_degree"},
             "config");
  require(raw.contains("schema_version"), "config needs a schema_version field");
  require(raw.at("schema_version").is_number_integer() &&
              raw.at("schema_version").get<int>() == 1,
          "unsupported schema_version (expected 1)");
  require(raw.contains("name") && raw.at("name").is_string(), "config needs a string name");
  require(raw.contains("space"), "config needs a space block");
  require(raw.contains("weight"), "config needs a weight block");

  Json cfg = raw;
  if (!cfg.contains("seed")) cfg["seed"] = 0;
  if (!cfg.contains("phi")) cfg["phi"] = Json::object();
  if (!cfg.contains("targets")) cfg["targets"] = Json::array();
  if (!cfg.contains("checks")) cfg["checks"] = Json::array({"decay"});
  if (!cfg.contains("epsilon_grid")) cfg["epsilon_grid"] = Json::array({1.0, 0.5, 0.25});
  if (!cfg.contains("pass_criteria")) cfg["pass_criteria"] = Json::object();
  if (!cfg.contains("probe_degree")) cfg["probe_degree"] = 8;

  check_keys(cfg.at("space"),
             {"kind", "domain", "p", "m", "k_max", "N_max", "alpha_max", "quad", "quad_order",
              "tail_radius", "sup_radius", "density"},
             "space");
  require(cfg.at("space").contains("kind") && cfg.at("space").at("kind").is_string(),
          "space needs a string kind");
  std::string kind = cfg.at("space").at("kind").get<std::string>();
  require(kind == "lp" || kind == "cm" || kind == "schwartz",
          "space.kind must be lp, cm, or schwartz");
  if (!cfg.at("space").contains("domain")) cfg["space"]["domain"] = "whole_line";

  const Json& w = cfg.at("weight");
  check_keys(w, {"preset", "param", "expression"}, "weight");
  require(w.contains("preset") != w.contains("expression"),
          "weight needs exactly one of preset / expression");
  check_keys(cfg.at("phi"), {"preset", "a", "b", "dim"}, "phi");

  require(cfg.at("checks").is_array() && !cfg.at("checks").empty(),
          "checks must be a non-empty array");
  for (const auto& c : cfg.at("checks")) {
    require(c.is_string(), "checks entries must be strings");
    bool known = false;
    for (const auto& k : kChecks) known = known || c.get<std::string>() == k;
    require(known, "unknown check '" + c.get<std::string>() + "'");
  }
  check_keys(cfg.at("pass_criteria"), kCriteria, "pass_criteria");

  require(cfg.at("epsilon_grid").is_array() && !cfg.at("epsilon_grid").empty(),
          "epsilon_grid must be a non-empty array");
  double prev = kInf;
  for (const auto& e : cfg.at("epsilon_grid")) {
    require(e.is_number() && e.get<double>() > 0.0, "epsilon_grid entries must be positive");
    require(e.get<double>() < prev, "epsilon_grid must be strictly decreasing");
    prev = e.get<double>();
  }

  for (const auto& t : cfg.at("targets")) {
    require(t.is_string(), "targets entries must be expression strings");
    parse_checked(t.get<std::string>(), "targets");
  }

  // rule half-line-weight: the Laguerre weight x^{alpha/2} e^{-x/2} lives on
  // (0, infinity) only
  if (w.contains("preset") && w.at("preset").get<std::string>() == "laguerre")
    require(is_half_line(cfg.at("space").at("domain")),
            "rule half-line-weight: the laguerre weight requires a half_line domain");

  bool needs_family = has_check(cfg, "decay");
  if (needs_family) {
    require(cfg.contains("family"), "the decay check needs a family block");
    require(!cfg.at("targets").empty(), "the decay check needs at least one target");
  }
  if (cfg.contains("family")) {
    const Json& f = cfg.at("family");
    check_keys(f, {"kind", "sizes", "N", "l", "frequency_grids", "spacings", "shift_radius",
                   "seed_expression"},
               "family");
    std::string fk = str_or(f, "kind", "monomial");
    require(fk == "monomial" || fk == "exponential" || fk == "gap" || fk == "translate",
            "family.kind must be monomial, exponential, gap, or translate");
    if (fk == "monomial" || fk == "gap") {
      require(f.contains("sizes") && f.at("sizes").is_array() && !f.at("sizes").empty(),
              "family needs a non-empty sizes array");
      int last = -1;
      for (const auto& s : f.at("sizes")) {
        require(s.is_number_integer() && s.get<int>() > last,
                "family.sizes must be strictly increasing integers");
        last = s.get<int>();
      }
    }
    if (fk == "gap")
      // rule gap-family-halfline: the gap family x^n e^{-x} is an L_p((0,inf))
      // object
      require(kind == "lp" && is_half_line(cfg.at("space").at("domain")),
              "rule gap-family-halfline: the gap family needs an lp space on half_line");
    if (fk == "exponential")
      require(f.contains("frequency_grids") && f.at("frequency_grids").is_array() &&
                  !f.at("frequency_grids").empty(),
              "exponential family needs frequency_grids");
    if (fk == "translate") {
      require(f.contains("spacings") && f.at("spacings").is_array() &&
                  !f.at("spacings").empty(),
              "translate family needs a spacings array");
      if (f.contains("seed_expression"))
        parse_checked(f.at("seed_expression").get<std::string>(), "family.seed_expression");
    }
  }
  if (cfg.contains("lemma212"))
    check_keys(cfg.at("lemma212"), {"f", "order", "radius", "x_points", "x_radius"},
               "lemma212");
  if (cfg.contains("prop210")) check_keys(cfg.at("prop210"), {"T", "orders", "h"}, "prop210");
  if (has_check(cfg, "closure")) {
    require(cfg.contains("closure"), "the closure check needs a closure block");
    const Json& c = cfg.at("closure");
    check_keys(c, {"target", "degrees", "frequency_grids"}, "closure");
    require(c.contains("target") && c.contains("degrees") && c.contains("frequency_grids"),
            "closure needs target, degrees, and frequency_grids");
    parse_checked(c.at("target").get<std::string>(), "closure.target");
  }

  // builds everything once so weight/phi/space/cross-field problems surface at
  // validation time (this also enforces smooth-weight-for-sup)
  BuiltConfig b = build_objects(cfg);
  check_sup_weight_rule(b, cfg);
  return cfg;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json raw;
  try {
    in >> raw;
  } catch (const std::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return validate_config(raw);
}

namespace {

std::vector<NamedTable> decay_stage(const Json& cfg, const BuiltConfig& b, Json& out) {
  const Json& fam = cfg.at("family");
  std::string fk = str_or(fam, "kind", "monomial");
  std::vector<NamedTable> tables;
  out = Json::array();

  auto run_target = [&](const std::string& texpr, int ti) {
    ScalarField target = parse_expression(texpr);
    NamedTable tab;
    tab.name = "decay_target_" + std::to_string(ti);
    Json entry;
    entry["target"] = texpr;

    if (fk == "monomial" || fk == "gap") {
      std::vector<int> sizes = fam.at("sizes").get<std::vector<int>>();
      std::function<BasisFamily(int)> builder;
      if (fk == "monomial") {
        builder = [&b](int d) {
          return monomial_family(b.phi, b.f0, d, b.weight_preset, b.weight_param);
        };
      } else {
        int N = int_or(fam, "N", 0), l = int_or(fam, "l", 2);
        builder = [N, l](int cap) { return gap_family(N, l, cap); };
      }
      auto d = error_decay(target, builder, sizes, b.space);
      tab.rows = d.table;
      entry["decaying"] = d.decaying;
      entry["tail_slope"] = d.tail_slope;
    } else if (fk == "exponential") {
      for (const auto& grid : fam.at("frequency_grids")) {
        std::vector<ComplexFrequency> freqs;
        for (const auto& l : grid)
          freqs.emplace_back(Complex(l.get<double>(), 0.0), 1.0);
        auto family = exponential_family(b.phi, b.f0, freqs);
        tab.rows.push_back({family.size(), project_in_space(target, family, b.space).error});
      }
    } else {  // translate
      ScalarField seed = fam.contains("seed_expression")
                             ? parse_expression(fam.at("seed_expression").get<std::string>())
                             : b.f0;
      double R = num_or(fam, "shift_radius", 4.0);
      for (const auto& sp : fam.at("spacings")) {
        double h = sp.get<double>();
        std::vector<Vec> shifts;
        for (double s = -R; s <= R + 1e-12; s += h) shifts.push_back(Vec::Constant(1, s));
        auto family = translate_family(seed, shifts);
        tab.rows.push_back({family.size(), project_in_space(target, family, b.space).error});
      }
    }
    entry["name"] = tab.name;
    entry["rows"] = table_json(tab.rows);
    entry["strictly_decreasing"] = strictly_decreasing(tab.rows);
    return std::make_pair(tab, entry);
  };

  const auto& targets = cfg.at("targets");
  int n = static_cast<int>(targets.size());
  std::vector<std::pair<NamedTable, Json>> results(static_cast<size_t>(n));
  int threads = std::min(max_threads(), n);
  if (threads > 1) {
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
      futs.push_back(std::async(std::launch::async, [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          results[static_cast<size_t>(i)] =
              run_target(targets[static_cast<size_t>(i)].get<std::string>(), i);
      }));
    for (auto& f : futs) f.get();
  } else {
    for (int i = 0; i < n; ++i)
      results[static_cast<size_t>(i)] =
          run_target(targets[static_cast<size_t>(i)].get<std::string>(), i);
  }
  for (auto& [tab, entry] : results) {
    out.push_back(entry);
    tables.push_back(std::move(tab));
  }
  return tables;
}

}  // namespace

RunReport run_experiment(const Json& config) {
  Json cfg = validate_config(config);
  BuiltConfig b = build_objects(cfg);

  RunReport rr;
  rr.report["schema_version"] = 1;
  rr.report["name"] = cfg.at("name");
  rr.report["config"] = cfg;
  rr.timing = Json::object();

  try {
    if (has_check(cfg, "admissibility")) {
      auto t0 = Clock::now();
      std::vector<double> grid = cfg.at("epsilon_grid").get<std::vector<double>>();
      AdmissibilityVerdict v;
      if (std::isfinite(b.space.p))
        v = check_thm31(b.f0, b.phi, b.space.p, b.space.measure, b.space.domain, grid, 12);
      else
        v = check_assumption26(b.space, b.f0, b.phi, grid.front(), 4);
      Json a;
      a["pass"] = v.pass;
      a["epsilon"] = v.epsilon;
      a["failures"] = v.failures;
      Json pe = Json::array();
      for (auto [e, ok] : v.per_epsilon) pe.push_back(Json::array({e, ok}));
      a["per_epsilon"] = pe;
      if (std::isfinite(v.norm_value)) a["norm_value"] = v.norm_value;
      rr.report["admissibility"] = a;
      rr.timing["admissibility_s"] = stage_seconds(t0);
    }

    if (has_check(cfg, "decay")) {
      auto t0 = Clock::now();
      Json out;
      auto tabs = decay_stage(cfg, b, out);
      rr.report["decay"] = out;
      for (auto& t : tabs) rr.tables.push_back(std::move(t));
      rr.timing["decay_s"] = stage_seconds(t0);
    }

    if (has_check(cfg, "density")) {
      auto t0 = Clock::now();
      auto v = annihilator_witness(b.space, b.f0, b.phi, cfg.at("probe_degree").get<int>());
      Json d;
      d["outcome"] = outcome_name(v.outcome);
      d["note"] = v.note;
      if (v.witness) {
        d["witness_kind"] = v.witness->kind == DualKind::PointDerivative
                                ? "point_derivative"
                                : "integrate_against";
        d["witness_label"] = v.witness->label;
        d["witness_pairing_max"] = v.witness_pairing_max;
        d["witness_target_value"] = v.witness_target_value;
      }
      Json decs = Json::array();
      for (const auto& dec : v.decays)
        decs.push_back(Json{{"decaying", dec.decaying}, {"rows", table_json(dec.table)}});
      d["decays"] = decs;
      rr.report["density"] = d;
      rr.timing["density_s"] = stage_seconds(t0);
    }

    if (has_check(cfg, "lemma212")) {
      auto t0 = Clock::now();
      Json lc = cfg.contains("lemma212") ? cfg.at("lemma212") : Json::object();
      ScalarField f = parse_expression(str_or(lc, "f", "exp(-x^2/2)"));
      int order = int_or(lc, "order", 16);
      double radius = num_or(lc, "radius", 12.0);
      int xp = int_or(lc, "x_points", 201);
      double xr = num_or(lc, "x_radius", 5.0);
      std::vector<double> grid;
      for (int i = 0; i < xp; ++i) grid.push_back(-xr + 2.0 * xr * i / (xp - 1));
      auto rule_at = [&](int ord) {
        return build_quadrature(Domain::whole_line(),
                                QuadratureKind::GaussLegendreComposite, ord, {radius, 0.0});
      };
      double r_full = check_lemma212(f, b.phi, b.f0, rule_at(order), grid).max_residual;
      double r_half = check_lemma212(f, b.phi, b.f0, rule_at(order / 2), grid).max_residual;
      double r_quarter =
          check_lemma212(f, b.phi, b.f0, rule_at(order / 4), grid).max_residual;
      Json l;
      l["max_residual"] = r_full;
      l["residual_half_order"] = r_half;
      l["residual_quarter_order"] = r_quarter;
      l["drop_factor"] = r_quarter / std::max(r_half, 1e-300);
      rr.report["lemma212"] = l;
      rr.timing["lemma212_s"] = stage_seconds(t0);
    }

    if (has_check(cfg, "prop210")) {
      auto t0 = Clock::now();
      Json pc = cfg.contains("prop210") ? cfg.at("prop210") : Json::object();
      HolomorphicProbe probe;
      probe.T = integrate_dual(parse_expression(str_or(pc, "T", "exp(-x^2)")));
      probe.phi = b.phi;
      probe.f0 = b.f0;
      probe.epsilon = cfg.at("epsilon_grid").front().get<double>();
      probe.rule = std::isfinite(b.space.p)
                       ? b.space.rule
                       : build_quadrature(Domain::whole_line(),
                                          QuadratureKind::GaussLegendreComposite, 16,
                                          {40.0, 0.0});
      std::vector<int> orders =
          pc.contains("orders") ? pc.at("orders").get<std::vector<int>>()
                                : std::vector<int>{1, 2, 3};
      double h = num_or(pc, "h", 1e-2);
      Json arr = Json::array();
      for (int k : orders) {
        auto r = check_prop210(probe, MultiIndex(k), DiffMethod::RichardsonFd, 3, h);
        arr.push_back(Json{{"alpha", k},
                           {"lhs", Json::array({r.lhs.real(), r.lhs.imag()})},
                           {"rhs", Json::array({r.rhs.real(), r.rhs.imag()})},
                           {"relative_error", r.relative_error}});
      }
      auto cs = check_prop210(probe, MultiIndex(1), DiffMethod::ComplexStep);
      Json p;
      p["richardson"] = arr;
      p["complex_step_relative_error"] = cs.relative_error;
      rr.report["prop210"] = p;
      rr.timing["prop210_s"] = stage_seconds(t0);
    }

    if (has_check(cfg, "closure")) {
      auto t0 = Clock::now();
      const Json& cc = cfg.at("closure");
      ScalarField target = parse_expression(cc.at("target").get<std::string>());
      std::vector<int> degrees = cc.at("degrees").get<std::vector<int>>();
      std::vector<std::vector<double>> grids =
          cc.at("frequency_grids").get<std::vector<std::vector<double>>>();
      auto c = compare_closures(target, b.phi, b.f0, b.space, degrees, grids,
                                b.weight_preset, b.weight_param);
      Json j;
      j["monomial"] = table_json(c.monomial);
      j["exponential"] = table_json(c.exponential);
      j["gap"] = c.gap;
      j["both_decay"] = c.both_decay;
      j["both_plateau"] = c.both_plateau;
      j["consistent"] = c.consistent;
      rr.report["closure"] = j;
      rr.tables.push_back({"closure_monomial", c.monomial});
      rr.tables.push_back({"closure_exponential", c.exponential});
      rr.timing["closure_s"] = stage_seconds(t0);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(e.what());
  }

  // pass criteria
  Json crit = Json::array();
  bool all = true;
  auto add = [&](const std::string& name, bool ok) {
    crit.push_back(Json{{"name", name}, {"pass", ok}});
    all = all && ok;
  };
  const Json& pc = cfg.at("pass_criteria");
  auto decay_tables = [&]() {
    std::vector<const NamedTable*> out;
    for (const auto& t : rr.tables)
      if (t.name.rfind("decay_", 0) == 0) out.push_back(&t);
    return out;
  };
  if (pc.contains("max_final_error")) {
    bool ok = true;
    for (const auto* t : decay_tables())
      ok = ok && !t->rows.empty() && t->rows.back().error < pc.at("max_final_error").get<double>();
    add("max_final_error", ok);
  }
  if (pc.contains("strictly_decreasing") && pc.at("strictly_decreasing").get<bool>()) {
    bool ok = true;
    for (const auto* t : decay_tables()) ok = ok && strictly_decreasing(t->rows);
    add("strictly_decreasing", ok);
  }
  if (pc.contains("expect_admissible"))
    add("expect_admissible",
        rr.report.contains("admissibility") &&
            rr.report.at("admissibility").at("pass").get<bool>() ==
                pc.at("expect_admissible").get<bool>());
  if (pc.contains("min_epsilon"))
    add("min_epsilon", rr.report.contains("admissibility") &&
                           rr.report.at("admissibility").at("epsilon").get<double>() >=
                               pc.at("min_epsilon").get<double>());
  if (pc.contains("expect_outcome"))
    add("expect_outcome",
        rr.report.contains("density") &&
            rr.report.at("density").at("outcome").get<std::string>() ==
                pc.at("expect_outcome").get<std::string>());
  if (pc.contains("max_witness_pairing"))
    add("max_witness_pairing",
        rr.report.contains("density") &&
            rr.report.at("density").contains("witness_pairing_max") &&
            rr.report.at("density").at("witness_pairing_max").get<double>() <
                pc.at("max_witness_pairing").get<double>());
  if (pc.contains("min_target_pairing"))
    add("min_target_pairing",
        rr.report.contains("density") &&
            rr.report.at("density").contains("witness_target_value") &&
            rr.report.at("density").at("witness_target_value").get<double>() >
                pc.at("min_target_pairing").get<double>());
  if (pc.contains("max_residual"))
    add("max_residual", rr.report.contains("lemma212") &&
                            rr.report.at("lemma212").at("max_residual").get<double>() <
                                pc.at("max_residual").get<double>());
  if (pc.contains("residual_drop_factor"))
    add("residual_drop_factor",
        rr.report.contains("lemma212") &&
            rr.report.at("lemma212").at("drop_factor").get<double>() >=
                pc.at("residual_drop_factor").get<double>());
  if (pc.contains("max_relative_error")) {
    bool ok = rr.report.contains("prop210");
    if (ok)
      for (const auto& r : rr.report.at("prop210").at("richardson"))
        ok = ok && r.at("relative_error").get<double>() <
                       pc.at("max_relative_error").get<double>();
    add("max_relative_error", ok);
  }
  if (pc.contains("max_complex_step_error"))
    add("max_complex_step_error",
        rr.report.contains("prop210") &&
            rr.report.at("prop210").at("complex_step_relative_error").get<double>() <
                pc.at("max_complex_step_error").get<double>());
  if (pc.contains("require_consistent") && pc.at("require_consistent").get<bool>())
    add("require_consistent", rr.report.contains("closure") &&
                                  rr.report.at("closure").at("consistent").get<bool>());
  if (pc.contains("max_closure_error")) {
    bool ok = rr.report.contains("closure");
    if (ok) {
      double lim = pc.at("max_closure_error").get<double>();
      const Json& cj = rr.report.at("closure");
      ok = cj.at("monomial").back()[1].get<double>() < lim &&
           cj.at("exponential").back()[1].get<double>() < lim;
    }
    add("max_closure_error", ok);
  }

  rr.report["criteria"] = crit;
  rr.report["pass"] = all;
  rr.pass = all;
  return rr;
}

int emit_plotdata(const RunReport& r, const std::string& dir, std::ostream* warn) {
  if (r.tables.empty()) {
    if (warn) *warn << "warning: report contains no decay tables; no CSV files written\n";
    return 0;
  }
  fs::create_directories(dir);
  int written = 0;
  for (const auto& t : r.tables) {
    std::ofstream out(fs::path(dir) / (t.name + ".csv"));
    if (!out) throw std::runtime_error("cannot write CSV under '" + dir + "'");
    out << "size,error\n";
    out.precision(17);
    for (const auto& row : t.rows) out << row.size << "," << row.error << "\n";
    ++written;
  }
  return written;
}

void write_report(const RunReport& r, const std::string& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json");
    if (!out) throw std::runtime_error("cannot write report under '" + out_dir + "'");
    out << r.report.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "timing.json");
    out << r.timing.dump(2) << "\n";
  }
  emit_plotdata(r, (fs::path(out_dir) / "tables").string());
}

std::vector<std::string> preset_names() {
  return {"hermite_l2",      "hermite_lp",         "laguerre_threshold",
          "exotic_l2",       "polynomial_lp_smallmeasure", "cm_polynomial_density",
          "cm_zero_obstruction", "schwartz_hermite", "gaussian_translates_schwartz",
          "gap_family",      "closure_compare",    "lemma212_check",
          "prop210_check"};
}

Json preset_config(const std::string& name, const std::map<std::string, double>& params) {
  auto param = [&](const std::string& k, double fallback) {
    auto it = params.find(k);
    return it == params.end() ? fallback : it->second;
  };
  Json c;
  c["schema_version"] = 1;
  c["name"] = name;
  c["weight"] = {{"preset", "gaussian"}};
  c["space"] = {{"kind", "lp"}, {"domain", "whole_line"}};

  if (name == "hermite_l2") {
    c["family"] = {{"kind", "monomial"}, {"sizes", {5, 10, 20, 40}}};
    c["targets"] = {"1/(1+x^2)"};
    c["checks"] = {"admissibility", "decay", "density"};
    c["pass_criteria"] = {{"max_final_error", 3e-2},
                          {"strictly_decreasing", true},
                          {"expect_admissible", true},
                          {"expect_outcome", "dense_consistent"}};
  } else if (name == "hermite_lp") {
    c["space"]["p"] = param("p", 4.0);
    c["family"] = {{"kind", "monomial"}, {"sizes", {5, 10, 20}}};
    c["targets"] = {"1/(1+x^2)"};
    c["checks"] = {"admissibility", "decay"};
    c["pass_criteria"] = {{"strictly_decreasing", true}, {"expect_admissible", true}};
  } else if (name == "laguerre_threshold") {
    double alpha = param("alpha", -0.5), p = param("p", 2.0);
    bool admissible = p < -2.0 / alpha;
    c["space"] = {{"kind", "lp"},     {"domain", "half_line"}, {"p", p},
                  {"quad", "tanh_sinh"}, {"quad_order", 48},   {"tail_radius", 80.0}};
    c["weight"] = {{"preset", "laguerre"}, {"param", alpha}};
    c["pass_criteria"] = {{"expect_admissible", admissible}};
    if (admissible) {
      c["family"] = {{"kind", "monomial"}, {"sizes", {10, 20, 30}}};
      c["targets"] = {"x*exp(-x)"};
      c["checks"] = {"admissibility", "decay"};
      c["pass_criteria"]["max_final_error"] = 1e-2;
      c["pass_criteria"]["min_epsilon"] = 0.2;
    } else {
      c["checks"] = {"admissibility"};
    }
  } else if (name == "exotic_l2") {
    c["weight"] = {{"preset", "exotic"}};
    c["family"] = {{"kind", "monomial"}, {"sizes", {4, 8, 16}}};
    c["targets"] = {"exp(-(x-1)^2)"};
    c["checks"] = {"decay"};
    c["pass_criteria"] = {{"strictly_decreasing", true}, {"max_final_error", 0.1}};
  } else if (name == "polynomial_lp_smallmeasure") {
    c["space"] = {{"kind", "lp"}, {"domain", {-1.0, 1.0}}, {"p", param("p", 3.0)}};
    c["weight"] = {{"expression", "1"}};
    c["family"] = {{"kind", "monomial"}, {"sizes", {4, 8, 16}}};
    c["targets"] = {"1/(1+x^2)"};
    c["checks"] = {"admissibility", "decay", "density"};
    c["pass_criteria"] = {{"strictly_decreasing", true},
                          {"expect_admissible", true},
                          {"expect_outcome", "dense_consistent"}};
  } else if (name == "cm_polynomial_density") {
    c["space"] = {{"kind", "cm"}, {"domain", {-1.0, 1.0}}, {"m", 1}};
    c["family"] = {{"kind", "monomial"}, {"sizes", {4, 8, 12}}};
    c["targets"] = {"1/(1+x^2)"};
    c["checks"] = {"admissibility", "decay", "density"};
    c["pass_criteria"] = {{"strictly_decreasing", true},
                          {"expect_outcome", "dense_consistent"}};
  } else if (name == "cm_zero_obstruction") {
    c["space"] = {{"kind", "cm"}, {"domain", {-1.0, 1.0}}};
    c["weight"] = {{"expression", "x*exp(-x^2)"}};
    c["family"] = {{"kind", "monomial"}, {"sizes", {3, 6}}};
    c["targets"] = {"1"};
    c["checks"] = {"decay", "density"};
    c["pass_criteria"] = {{"expect_outcome", "obstruction_found"},
                          {"max_witness_pairing", 1e-10},
                          {"min_target_pairing", 1e-3}};
  } else if (name == "schwartz_hermite") {
    c["space"] = {{"kind", "schwartz"}, {"N_max", 2}, {"alpha_max", 2}};
    c["family"] = {{"kind", "monomial"}, {"sizes", {4, 8, 12}}};
    c["targets"] = {"exp(-(x-1)^2)"};
    c["checks"] = {"admissibility", "decay"};
    c["pass_criteria"] = {{"strictly_decreasing", true}, {"expect_admissible", true}};
  } else if (name == "gaussian_translates_schwartz") {
    c["space"] = {{"kind", "schwartz"}, {"N_max", 1}, {"alpha_max", 1}};
    c["family"] = {{"kind", "translate"},
                   {"spacings", {1.0, 0.5, 0.25}},
                   {"shift_radius", 4.0},
                   {"seed_expression", "exp(-x^2)"}};
    c["targets"] = {"exp(-(x-0.3)^2)"};
    c["checks"] = {"decay"};
    c["pass_criteria"] = {{"strictly_decreasing", true}};
  } else if (name == "gap_family") {
    c["space"] = {{"kind", "lp"}, {"domain", "half_line"}, {"tail_radius", 60.0}};
    c["weight"] = {{"expression", "exp(-x)"}};
    c["family"] = {{"kind", "gap"},
                   {"N", static_cast<int>(param("N", 3))},
                   {"l", static_cast<int>(param("l", 2))},
                   {"sizes", {9, 19, 40}}};
    c["targets"] = {"x*exp(-x)"};
    c["checks"] = {"decay"};
    c["pass_criteria"] = {{"strictly_decreasing", true}};
  } else if (name == "closure_compare") {
    c["checks"] = {"closure"};
    c["closure"] = {{"target", "exp(-(x-1)^2)"},
                    {"degrees", {4, 10, 16}},
                    {"frequency_grids", Json::array()}};
    std::vector<double> widths = {3.0, 4.0, 5.0};
    std::vector<int> degrees = {4, 10, 16};
    for (size_t k = 0; k < degrees.size(); ++k) {
      Json g = Json::array();
      for (int i = 0; i <= degrees[k]; ++i)
        g.push_back(-widths[k] + 2.0 * widths[k] * i / degrees[k]);
      c["closure"]["frequency_grids"].push_back(g);
    }
    c["pass_criteria"] = {{"require_consistent", true}, {"max_closure_error", 1e-2}};
  } else if (name == "lemma212_check") {
    c["checks"] = {"lemma212"};
    c["lemma212"] = {{"f", "exp(-x^2/2)"}, {"order", 16}, {"radius", 12.0},
                     {"x_points", 201},    {"x_radius", 5.0}};
    c["pass_criteria"] = {{"max_residual", 1e-8}, {"residual_drop_factor", 10.0}};
  } else if (name == "prop210_check") {
    c["checks"] = {"prop210"};
    c["prop210"] = {{"T", "exp(-x^2)"}, {"orders", {1, 2, 3}}};
    c["pass_criteria"] = {{"max_relative_error", 1e-5}, {"max_complex_step_error", 1e-10}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return validate_config(c);
}

}  // namespace denslab
