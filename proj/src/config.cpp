#include "charcauchy/config.hpp"

#include <fstream>

namespace charcauchy {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at \"" + where + "\": " + what);
}

double need_number(const Json& j, const std::string& block, const char* key) {
  if (!j.contains(key)) fail(block + "." + key, "missing required field");
  if (!j[key].is_number()) fail(block + "." + key, "expected a number");
  return j[key].get<double>();
}

double number_or(const Json& j, const std::string& block, const char* key,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(block + "." + key, "expected a number");
  return j[key].get<double>();
}

Expr parse_expr_field(const Json& v, const std::string& where) {
  if (v.is_number()) return Expr::parse(format_double(v.get<double>()));
  if (v.is_string()) {
    try {
      return Expr::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected an expression string or a number");
}

}  // namespace

SolvePath parse_path(const std::string& name) {
  if (name == "rendall") return SolvePath::rendall;
  if (name == "representation") return SolvePath::representation;
  if (name == "final_formula") return SolvePath::final_formula;
  throw ConfigError("unknown solve path \"" + name +
                    "\" (expected rendall | representation | final_formula)");
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  if (!j.is_object()) fail("<root>", "config must be a JSON object");

  if (!j.contains("spacetime")) fail("spacetime", "missing block");
  {
    const Json& b = j["spacetime"];
    c.t_min = need_number(b, "spacetime", "t_min");
    c.t_max = need_number(b, "spacetime", "t_max");
    if (!(c.t_min < c.t_max)) fail("spacetime", "t_min must be < t_max");
    if (b.contains("metric")) {
      const Json& m = b["metric"];
      if (m.is_string() && m.get<std::string>() == "minkowski") {
        c.metric = MetricKind::minkowski;
      } else if (m.is_object() && m.contains("conformal")) {
        c.metric = MetricKind::conformal;
        c.omega = parse_expr_field(m["conformal"], "spacetime.metric.conformal");
      } else {
        fail("spacetime.metric",
             "expected \"minkowski\" or {\"conformal\": <expr>}");
      }
    }
  }

  if (!j.contains("grid")) fail("grid", "missing block");
  {
    const Json& b = j["grid"];
    c.h = need_number(b, "grid", "h");
    c.u_halfwidth = need_number(b, "grid", "u_halfwidth");
    if (!b.contains("v_range") || !b["v_range"].is_array() ||
        b["v_range"].size() != 2)
      fail("grid.v_range", "expected [v_lo, v_hi]");
    c.v_lo = b["v_range"][0].get<double>();
    c.v_hi = b["v_range"][1].get<double>();
  }

  if (j.contains("operator")) {
    const Json& b = j["operator"];
    for (const char* key : {"A", "B", "q"}) {
      if (!b.contains(key)) continue;
      Expr e = parse_expr_field(b[key], std::string("operator.") + key);
      if (key[0] == 'A')
        c.A = std::move(e);
      else if (key[0] == 'B')
        c.B = std::move(e);
      else
        c.q = std::move(e);
    }
  }

  if (j.contains("data")) {
    const Json& b = j["data"];
    if (b.contains("f") && !b["f"].is_null()) {
      const Json& fb = b["f"];
      if (!fb.is_object() || !fb.contains("expr") || !fb.contains("support"))
        fail("data.f", "expected {\"expr\": ..., \"support\": [v_a, v_b]}");
      c.f_expr = parse_expr_field(fb["expr"], "data.f.expr");
      if (!fb["support"].is_array() || fb["support"].size() != 2)
        fail("data.f.support", "expected [v_a, v_b]");
      c.f_lo = fb["support"][0].get<double>();
      c.f_hi = fb["support"][1].get<double>();
      if (c.f_expr->depends_on_u())
        fail("data.f.expr", "characteristic datum must depend on v only");
    }
    if (b.contains("F") && !b["F"].is_null()) {
      const Json& Fb = b["F"];
      if (!Fb.is_object() || !Fb.contains("expr") || !Fb.contains("v_support"))
        fail("data.F", "expected {\"expr\": ..., \"v_support\": [v_c, v_d]}");
      c.F_expr = parse_expr_field(Fb["expr"], "data.F.expr");
      if (!Fb["v_support"].is_array() || Fb["v_support"].size() != 2)
        fail("data.F.v_support", "expected [v_c, v_d]");
      c.F_lo = Fb["v_support"][0].get<double>();
      c.F_hi = Fb["v_support"][1].get<double>();
    }
  }

  if (j.contains("solver")) {
    const Json& b = j["solver"];
    c.solver.n_jet = static_cast<int>(number_or(b, "solver", "N_jet", 6));
    if (c.solver.n_jet < 1 || c.solver.n_jet > 12)
      fail("solver.N_jet", "must be in 1..12");
    c.solver.delta = number_or(b, "solver", "delta", 0.0);
    c.solver.delta_e = number_or(b, "solver", "delta_e", 0.0);
    c.solver.margin_steps =
        static_cast<int>(number_or(b, "solver", "margin_steps", 5));
    c.solver.sigma_profile =
        static_cast<int>(number_or(b, "solver", "sigma_profile", 1));
    if (b.contains("mu_rule")) {
      const std::string rule = b["mu_rule"].get<std::string>();
      if (rule == "unit")
        c.solver.mu_rule = MuRule::unit;
      else if (rule == "appendix")
        c.solver.mu_rule = MuRule::appendix_style;
      else
        fail("solver.mu_rule", "expected \"unit\" or \"appendix\"");
    }
    if (b.contains("paths")) {
      if (!b["paths"].is_array() || b["paths"].empty())
        fail("solver.paths", "expected a non-empty array of path names");
      c.paths.clear();
      for (const Json& p : b["paths"]) c.paths.push_back(parse_path(p.get<std::string>()));
    }
  }

  if (j.contains("verify")) {
    const Json& b = j["verify"];
    c.seed = static_cast<std::uint64_t>(number_or(b, "verify", "seed", 1));
    c.battery_size =
        static_cast<int>(number_or(b, "verify", "battery_size", 20));
    c.tol_factor = number_or(b, "verify", "tol_factor", 10.0);
    if (b.contains("h_list")) {
      for (const Json& x : b["h_list"]) c.h_list.push_back(x.get<double>());
    }
  }

  if (j.contains("expansion")) {
    const Json& b = j["expansion"];
    if (b.contains("cases")) {
      c.expansion_cases.clear();
      for (const Json& x : b["cases"]) c.expansion_cases.push_back(x.get<std::string>());
    }
    c.conformal_lambda = number_or(b, "expansion", "lambda", 4.0);
    c.geometric_fd_step = number_or(b, "expansion", "fd_step", 1e-4);
  }

  if (j.contains("converge")) {
    const Json& b = j["converge"];
    if (b.contains("problem")) c.converge_problem = b["problem"].get<std::string>();
    if (b.contains("path")) c.converge_path = b["path"].get<std::string>();
    if (b.contains("h_list")) {
      c.h_list.clear();
      for (const Json& x : b["h_list"]) c.h_list.push_back(x.get<double>());
    }
  }

  if (j.contains("output")) {
    const Json& b = j["output"];
    if (b.contains("write_fields")) c.write_fields = b["write_fields"].get<bool>();
  }

  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config JSON parse failure in " + path + ": " + e.what());
  }
  return from_json(j);
}

SlabSpacetime RunConfig::make_spacetime() const {
  SlabSpacetime st;
  st.t_min = t_min;
  st.t_max = t_max;
  st.metric = metric;
  if (metric == MetricKind::conformal) {
    const Expr e = *omega;
    st.omega = [e](double u, double v) { return e(u, v); };
  }
  return st;
}

SlabGrid RunConfig::make_grid() const {
  return build_grid(make_spacetime(), h, u_halfwidth, v_lo, v_hi);
}

WaveOperator RunConfig::make_operator() const {
  WaveOperator op = WaveOperator::box();
  const int jet_order = std::max(12, solver.n_jet);
  if (A) op.A = Coefficient::from_expr(*A, jet_order);
  if (B) op.B = Coefficient::from_expr(*B, jet_order);
  if (q) op.q = Coefficient::from_expr(*q, jet_order);
  return op;
}

CharacteristicDatum RunConfig::make_datum(const SlabGrid& grid) const {
  if (!f_expr) return CharacteristicDatum::zero(grid);
  const Expr e = *f_expr;
  return CharacteristicDatum::from_function(
      grid, [e](double v) { return e(0.0, v); }, f_lo, f_hi);
}

Inhomogeneity RunConfig::make_inhomogeneity() const {
  if (!F_expr) return Inhomogeneity::none();
  const int jet_order = std::max(12, solver.n_jet);
  return Inhomogeneity::from_coefficient(
      Coefficient::from_expr(*F_expr, jet_order), F_lo, F_hi);
}

}  // namespace charcauchy
