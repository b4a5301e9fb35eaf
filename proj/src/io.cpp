#include "pdwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "pdwave/error.hpp"

namespace pdwave::io {

namespace {

// Strict reader for one JSON object: typed lookups, then finish() rejects
// keys that were never asked for.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(ErrorCode::Config, where_ + " must be an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const Json& at(const std::string& key) {
    if (!has(key)) fail(ErrorCode::Config, where_ + "." + key + " is required");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) fail(ErrorCode::Config, where_ + "." + key + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorCode::Config, where_ + "." + key + " must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(ErrorCode::Config, where_ + "." + key + " must be a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) fail(ErrorCode::Config, where_ + "." + key + " must be a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) fail(ErrorCode::Config, where_ + "." + key + " must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) fail(ErrorCode::Config, "unknown key " + where_ + "." + k);
    }
  }

  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

ParamList params_from_json(const Json& j, const std::string& where) {
  ParamList out;
  if (j.is_null()) return out;
  if (!j.is_object()) fail(ErrorCode::Config, where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) fail(ErrorCode::Config, where + "." + k + " must be a number");
    out.emplace_back(k, v.get<double>());
  }
  return out;
}

Json params_to_json(const ParamList& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table,
             const std::string& where) {
  std::string names;
  for (const auto& [name, value] : table) {
    if (s == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  fail(ErrorCode::Config, where + " must be one of " + names + ", got '" + s + "'");
}

CoefficientFunction coefficient_from_json(const Json& j, const std::string& where) {
  Reader r(j, where);
  const std::string name = r.text("name");
  const ParamList params = params_from_json(r.has("params") ? j.at("params") : Json(), where + ".params");
  r.finish();
  return CoefficientFunction::from_name(name, params);
}

Json to_json(const CoefficientFunction& f) {
  return {{"name", f.name}, {"params", params_to_json(f.params)}};
}

double double_or_text(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  fail(ErrorCode::Config, "expected a number");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::Indicator: return "indicator";
    case InitialKind::Supplied: return "supplied";
  }
  return "unknown";
}

const char* to_string(ConeSign s) {
  return s == ConeSign::Reflected ? "reflected" : "positive";
}

const char* to_string(Convolution c) {
  return c == Convolution::Direct ? "direct" : "spectral";
}

Json to_json(const Potential& p) {
  return {{"name", p.name()}, {"params", params_to_json(p.params())}, {"reflected", p.is_reflected()}};
}

Potential potential_from_json(const Json& j) {
  Reader r(j, "potential");
  const std::string name = r.text("name");
  const ParamList params = params_from_json(r.has("params") ? j.at("params") : Json(), "potential.params");
  const bool reflected = r.flag("reflected", false);
  r.finish();
  Potential p = Potential::from_name(name, params);
  return reflected ? p.reflected() : p;
}

Coupling coupling_from_json(const Json& j) {
  Reader r(j, "material");
  const std::string kind = r.text("coupling", "discrete");
  if (kind == "discrete") {
    const Json& bonds = r.at("bonds");
    if (!bonds.is_array()) fail(ErrorCode::Config, "material.bonds must be an array");
    std::vector<Bond> list;
    for (std::size_t i = 0; i < bonds.size(); ++i) {
      Reader b(bonds[i], "material.bonds[" + std::to_string(i) + "]");
      const double xi = b.number("xi");
      Potential phi = potential_from_json(b.at("potential"));
      b.finish();
      list.push_back({xi, std::move(phi)});
    }
    r.finish();
    return Coupling(make_discrete(std::move(list)));
  }
  if (kind == "continuous") {
    CoefficientFunction alpha = coefficient_from_json(r.at("alpha"), "material.alpha");
    CoefficientFunction beta = coefficient_from_json(r.at("beta"), "material.beta");
    Potential phi = potential_from_json(r.at("potential"));
    const double xi_max = r.number("xi_max");
    const double xi_step = r.number("xi_step");
    r.finish();
    return Coupling(build_quadrature(std::move(alpha), std::move(beta), std::move(phi), xi_max, xi_step));
  }
  if (kind == "silling") {
    const double horizon = r.number("horizon", 1.0);
    const double c2 = r.number("c2", 0.5);
    const double c3 = r.number("c3", -1.0 / 6.0);
    const double step = r.number("xi_step", 0.01);
    r.finish();
    return Coupling(silling_medium(horizon, c2, c3, step));
  }
  fail(ErrorCode::Config, "material.coupling must be discrete, continuous or silling, got '" + kind + "'");
}

Json to_json(const Coupling& c) {
  if (c.is_discrete()) {
    Json bonds = Json::array();
    for (const auto& b : c.discrete().bonds) {
      bonds.push_back({{"xi", b.xi}, {"potential", to_json(b.phi)}});
    }
    return {{"coupling", "discrete"}, {"bonds", bonds}};
  }
  const auto& k = c.continuous();
  return {{"coupling", "continuous"},
          {"alpha", to_json(k.alpha)},
          {"beta", to_json(k.beta)},
          {"potential", to_json(k.phi)},
          {"xi_max", k.xi_max},
          {"xi_step", k.xi_step}};
}

Grid grid_from_json(const Json& j) {
  Reader r(j, "grid");
  const double L = r.number("L");
  const std::size_t N = r.count("N");
  r.finish();
  return make_grid(L, N);
}

Json to_json(const Grid& g) { return {{"L", g.half_length()}, {"N", g.size()}}; }

SolveOptions solve_options_from_json(const Json& j) {
  SolveOptions o;
  if (j.is_null()) return o;
  Reader r(j, "solver");
  o.max_iterations = r.count("max_iterations", o.max_iterations);
  o.tol_residual = r.number("tol_residual", o.tol_residual);
  o.tol_stagnation = r.number("tol_stagnation", o.tol_stagnation);
  o.stagnation_window = r.count("stagnation_window", o.stagnation_window);
  o.initial = parse_enum<InitialKind>(
      r.text("initial", "gaussian"),
      {{"gaussian", InitialKind::Gaussian}, {"indicator", InitialKind::Indicator}, {"supplied", InitialKind::Supplied}},
      "solver.initial");
  o.initial_width = r.number("initial_width", o.initial_width);
  o.sign = parse_enum<ConeSign>(r.text("sign", "positive"),
                                {{"positive", ConeSign::Positive}, {"reflected", ConeSign::Reflected}},
                                "solver.sign");
  o.record_history = r.flag("record_history", o.record_history);
  o.convolution = parse_enum<Convolution>(
      r.text("convolution", "spectral"),
      {{"spectral", Convolution::Spectral}, {"direct", Convolution::Direct}}, "solver.convolution");
  o.cone_tolerance = r.number("cone_tolerance", o.cone_tolerance);
  r.finish();
  if (!(o.tol_residual > 0.0) || !(o.tol_stagnation > 0.0)) {
    fail(ErrorCode::Config, "solver tolerances must be positive");
  }
  if (o.initial_width < 0.0) fail(ErrorCode::Config, "solver.initial_width must be nonnegative");
  if (o.stagnation_window == 0) fail(ErrorCode::Config, "solver.stagnation_window must be positive");
  return o;
}

Json to_json(const SolveOptions& o) {
  return {{"max_iterations", o.max_iterations},
          {"tol_residual", o.tol_residual},
          {"tol_stagnation", o.tol_stagnation},
          {"stagnation_window", o.stagnation_window},
          {"initial", to_string(o.initial)},
          {"initial_width", o.initial_width},
          {"sign", to_string(o.sign)},
          {"record_history", o.record_history},
          {"convolution", to_string(o.convolution)},
          {"cone_tolerance", o.cone_tolerance}};
}

SweepOptions sweep_options_from_json(const Json& j) {
  SweepOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) fail(ErrorCode::Config, "solver must be an object");
  Json rest = j;
  if (rest.contains("warm_start")) {
    if (!rest["warm_start"].is_boolean()) fail(ErrorCode::Config, "solver.warm_start must be a boolean");
    o.warm_start = rest["warm_start"].get<bool>();
    rest.erase("warm_start");
  }
  if (rest.contains("warm_start_min_ratio")) {
    if (!rest["warm_start_min_ratio"].is_number()) {
      fail(ErrorCode::Config, "solver.warm_start_min_ratio must be a number");
    }
    o.warm_start_min_ratio = rest["warm_start_min_ratio"].get<double>();
    rest.erase("warm_start_min_ratio");
  }
  o.solve = solve_options_from_json(rest);
  return o;
}

Json to_json(const Profile& w) {
  Json values = Json::array();
  for (double v : w.values()) values.push_back(v);
  return {{"grid", to_json(w.grid())}, {"values", values}};
}

Profile profile_from_json(const Json& j) {
  Reader r(j, "profile");
  const Grid g = grid_from_json(r.at("grid"));
  const Json& values = r.at("values");
  r.finish();
  if (!values.is_array()) fail(ErrorCode::Config, "profile.values must be an array");
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& x : values) {
    if (!x.is_number()) fail(ErrorCode::Config, "profile.values must hold numbers");
    v.push_back(x.get<double>());
  }
  if (v.size() != g.size()) {
    fail(ErrorCode::Config, "profile has " + std::to_string(v.size()) + " values for a grid of " +
                                std::to_string(g.size()) + " points");
  }
  return Profile(g, std::move(v));
}

std::string profile_csv(const Profile& w) {
  std::string out = "x,value\n";
  for (std::size_t j = 0; j < w.size(); ++j) {
    out += format_double(w.grid().node(j));
    out += ',';
    out += format_double(w[j]);
    out += '\n';
  }
  return out;
}

Json to_json(const ConeReport& r) {
  return {{"evenness_defect", r.evenness_defect},
          {"negativity_defect", r.negativity_defect},
          {"unimodality_defect", r.unimodality_defect},
          {"decay_defect", r.decay_defect},
          {"tolerance", r.tolerance},
          {"norm", r.norm},
          {"in_cone", r.in_cone()}};
}

Json to_json(const EnergyReport& r) {
  return {{"P", r.P},
          {"K", r.K},
          {"Q", r.Q},
          {"sigma2_candidate", r.sigma2_candidate},
          {"superquadratic_gap", r.superquadratic_gap}};
}

Json to_json(const SuperquadraticReport& r) {
  return {{"normalization_defect", number(r.normalization_defect)},
          {"convexity_violation", number(r.convexity_violation)},
          {"monotonicity_violation", number(r.monotonicity_violation)},
          {"growth_violation", number(r.growth_violation)},
          {"worst_r", r.worst_r},
          {"max_violation", number(r.max_violation())}};
}

Json to_json(const WaveSolution& s, bool with_history) {
  Json j = {{"K", s.K},
            {"sigma2", s.sigma2},
            {"sigma", s.sigma()},
            {"P", s.P},
            {"Q", s.Q},
            {"iterations", s.iterations},
            {"residual", number(s.residual)},
            {"min_increment", s.min_increment},
            {"min_gain_margin", s.min_gain_margin},
            {"status", to_string(s.status)},
            {"converged", s.converged()},
            {"sign", to_string(s.sign)},
            {"localization_ratio", localization_ratio(s.cone_profile())},
            {"cone", to_json(s.cone)},
            {"profile", to_json(s.profile)}};
  if (with_history) {
    Json h = Json::array();
    for (const auto& r : s.history) {
      h.push_back({{"P", r.P},
                   {"K", r.K},
                   {"mu", r.mu},
                   {"residual", r.residual},
                   {"increment", r.increment},
                   {"gain_bound", r.gain_bound},
                   {"cone_defect", r.cone_defect}});
    }
    j["history"] = h;
  }
  return j;
}

Json to_json(const SweepRow& r) {
  return {{"K", r.K},
          {"P", r.P},
          {"sigma", r.sigma},
          {"sigma2", r.sigma2},
          {"ratio", r.ratio},
          {"residual", number(r.residual)},
          {"iterations", r.iterations},
          {"status", r.ok() ? to_string(r.status) : "error"},
          {"warm_started", r.warm_started},
          {"error", r.error}};
}

std::vector<SweepRow> sweep_rows_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::Config, "sweep table must be an array of rows");
  std::vector<SweepRow> rows;
  for (const auto& x : j) {
    if (!x.is_object()) fail(ErrorCode::Config, "sweep rows must be objects");
    SweepRow r;
    r.K = double_or_text(x.at("K"));
    r.ratio = double_or_text(x.at("ratio"));
    if (x.contains("P")) r.P = double_or_text(x.at("P"));
    if (x.contains("sigma2")) r.sigma2 = double_or_text(x.at("sigma2"));
    if (x.contains("sigma")) r.sigma = double_or_text(x.at("sigma"));
    if (x.contains("residual")) r.residual = double_or_text(x.at("residual"));
    if (x.contains("iterations") && x.at("iterations").is_number_unsigned()) {
      r.iterations = x.at("iterations").get<std::size_t>();
    }
    if (x.contains("warm_started") && x.at("warm_started").is_boolean()) {
      r.warm_started = x.at("warm_started").get<bool>();
    }
    if (x.contains("status") && x.at("status").is_string()) {
      const auto st = x.at("status").get<std::string>();
      for (auto s : {SolveStatus::Converged, SolveStatus::MaxIterations, SolveStatus::Stagnated}) {
        if (st == to_string(s)) r.status = s;
      }
    }
    if (x.contains("error") && x.at("error").is_string()) r.error = x.at("error").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

Json to_json(const ThresholdResult& r) {
  return {{"found", r.found},
          {"K_low", r.K_low},
          {"K_high", r.K_high},
          {"K_estimate", r.K_estimate},
          {"trigger", r.trigger},
          {"note", r.note}};
}

ThresholdResult threshold_from_json(const Json& j) {
  Reader r(j, "threshold");
  ThresholdResult t;
  t.found = r.flag("found", false);
  t.K_low = r.number("K_low");
  t.K_high = r.number("K_high");
  t.K_estimate = r.number("K_estimate", 0.5 * (t.K_low + t.K_high));
  t.trigger = r.number("trigger", 2.0);
  t.note = r.text("note", "");
  r.finish();
  return t;
}

Json to_json(const DispersionCurve& d) {
  return {{"k", d.k}, {"theta2", d.theta2}, {"omega2", d.omega2}, {"c0", d.c0}, {"c_inf", d.c_inf}};
}

Json to_json(const KdvCoefficients& k) {
  return {{"c0", k.c0}, {"c1_moment", k.c1_moment}, {"c1_symbol", k.c1_symbol}, {"c2", k.c2}};
}

Json to_json(const KdvComparison& k) {
  return {{"eps", k.eps},
          {"sigma2", k.sigma2},
          {"sigma2_predicted", k.sigma2_predicted},
          {"sup_error", k.sup_error},
          {"l2_error", k.l2_error},
          {"amplitude_ratio", k.amplitude_ratio}};
}

Json to_json(const DecayFit& f) {
  return {{"lambda", f.lambda},
          {"intercept", f.intercept},
          {"samples", f.samples},
          {"x_low", f.x_low},
          {"x_high", f.x_high}};
}

Json to_json(const PropagationReport& r) {
  return {{"duration", r.duration},
          {"dt", r.dt},
          {"steps", r.steps},
          {"expected_speed", r.expected_speed},
          {"measured_speed", number(r.measured_speed)},
          {"speed_error", number(r.speed_error)},
          {"shift", number(r.shift)},
          {"shape_error", number(r.shape_error)},
          {"energy_initial", number(r.energy_initial)},
          {"energy_final", number(r.energy_final)},
          {"energy_drift", number(r.energy_drift)},
          {"aborted", r.aborted},
          {"message", r.message}};
}

}  // namespace pdwave::io
