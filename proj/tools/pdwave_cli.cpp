// pdwave command-line front end. Everything numerical goes through the C API
// in pdwave.h; this file only handles configuration and artifacts.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdwave/pdwave.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kInput = 1, kNotConverged = 2, kNumerical = 3 };

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& msg) { throw Failure{kInput, msg}; }

int exit_for(pdw_status s) {
  switch (s) {
    case PDW_OK: return kOk;
    case PDW_ERR_INPUT: return kInput;
    case PDW_ERR_NOT_CONVERGED: return kNotConverged;
    default: return kNumerical;
  }
}

void check(pdw_status s, const std::string& what) {
  if (s == PDW_OK) return;
  throw Failure{exit_for(s), what + ": " + pdw_status_string(s) + ": " + pdw_last_error_message()};
}

struct Deleter {
  void operator()(pdw_grid* p) const { pdw_grid_destroy(p); }
  void operator()(pdw_coupling* p) const { pdw_coupling_destroy(p); }
  void operator()(pdw_profile* p) const { pdw_profile_destroy(p); }
  void operator()(pdw_solution* p) const { pdw_solution_destroy(p); }
};
using GridPtr = std::unique_ptr<pdw_grid, Deleter>;
using CouplingPtr = std::unique_ptr<pdw_coupling, Deleter>;
using ProfilePtr = std::unique_ptr<pdw_profile, Deleter>;
using SolutionPtr = std::unique_ptr<pdw_solution, Deleter>;

// Takes ownership of a library-allocated string.
std::string take(char* s) {
  std::string out = s ? s : "";
  pdw_string_free(s);
  return out;
}

Json take_json(char* s) { return Json::parse(take(s)); }

std::string num(double v) {
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
  return out + '"';
}

// ---------------------------------------------------------------------------
// Configuration

void allow_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) config_error(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k == allowed;
    if (!ok) config_error("unknown key '" + k + "' in " + where);
  }
}

double get_number(const Json& j, const char* key, const std::string& where, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) config_error(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

double require_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error("missing " + where + "." + key);
  return get_number(j, key, where, 0.0);
}

std::size_t get_count(const Json& j, const char* key, const std::string& where, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) config_error(where + "." + key + " must be a nonnegative integer");
  return j.at(key).get<std::size_t>();
}

std::string get_text(const Json& j, const char* key, const std::string& where, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) config_error(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

// A list of numbers, either literal or {"from", "to", "step"}.
std::vector<double> number_list(const Json& j, const std::string& where) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& x : j) {
      if (!x.is_number()) config_error(where + " must contain numbers");
      out.push_back(x.get<double>());
    }
  } else if (j.is_object()) {
    allow_keys(j, where, {"from", "to", "step"});
    const double a = require_number(j, "from", where);
    const double b = require_number(j, "to", where);
    const double h = require_number(j, "step", where);
    if (!(h > 0.0) || b < a) config_error(where + " needs from <= to and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    config_error(where + " must be an array or a {from, to, step} range");
  }
  if (out.empty()) config_error(where + " is empty");
  return out;
}

struct RunConfig {
  Json resolved;  // embedded in every artifact
  CouplingPtr coupling;
  GridPtr grid;
  Json solver;
  fs::path output_dir;
};

const std::vector<std::string> kCommands = {"solve", "sweep",    "dispersion", "decay",
                                            "kdv",   "simulate", "check"};

RunConfig resolve(Json cfg, const std::string& command, const std::string& out_flag, int threads_flag) {
  allow_keys(cfg, "config",
             {"schema_version", "material", "grid", "solver", "output_dir", "seed", "threads", "solve",
              "sweep", "dispersion", "decay", "kdv", "simulate", "check", "description"});
  if (!cfg.contains("schema_version")) config_error("missing schema_version");
  if (cfg.at("schema_version") != kSchemaVersion) {
    config_error("unsupported schema_version, expected " + std::to_string(kSchemaVersion));
  }
  RunConfig rc;
  if (!cfg.contains("material")) config_error("missing material section");
  pdw_coupling* c = nullptr;
  check(pdw_coupling_from_json(cfg.at("material").dump().c_str(), &c), "material");
  rc.coupling.reset(c);
  cfg["material"] = take_json([&] {
    char* s = nullptr;
    check(pdw_coupling_to_json(c, &s), "material");
    return s;
  }());

  if (command != "dispersion") {
    if (!cfg.contains("grid")) config_error("missing grid section");
    const Json& g = cfg.at("grid");
    allow_keys(g, "grid", {"L", "N"});
    pdw_grid* gp = nullptr;
    check(pdw_grid_create(require_number(g, "L", "grid"), get_count(g, "N", "grid", 0), &gp), "grid");
    rc.grid.reset(gp);
  }

  if (!cfg.contains("solver")) cfg["solver"] = Json::object();
  rc.solver = cfg.at("solver");
  if (!rc.solver.is_object()) config_error("solver must be an object");

  if (!cfg.contains("seed")) cfg["seed"] = 0u;
  if (!cfg.at("seed").is_number_unsigned()) config_error("seed must be a nonnegative integer");

  std::string out = get_text(cfg, "output_dir", "config", "pdwave_out");
  if (const char* env = std::getenv("PDWAVE_OUTPUT_DIR"); env && *env) out = env;
  if (!out_flag.empty()) out = out_flag;
  cfg["output_dir"] = out;
  rc.output_dir = out;

  std::size_t threads = get_count(cfg, "threads", "config", 1);
  if (const char* env = std::getenv("PDWAVE_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) config_error("PDWAVE_THREADS must be a positive integer");
    threads = static_cast<std::size_t>(v);
  }
  if (threads_flag > 0) threads = static_cast<std::size_t>(threads_flag);
  if (threads == 0) config_error("threads must be positive");
  cfg["threads"] = threads;

  if (!cfg.contains(command)) cfg[command] = Json::object();
  // Sections of other commands are kept verbatim; they are not used by this run.
  cfg["command"] = command;
  rc.resolved = std::move(cfg);
  return rc;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Artifacts

class Artifacts {
 public:
  Artifacts(fs::path dir, Json config) : dir_(std::move(dir)), config_(std::move(config)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Failure{kInput, "cannot create output directory '" + dir_.string() + "': " + ec.message()};
  }

  void json(const std::string& name, Json body) {
    body["config"] = config_;
    write(name, body.dump(2) + "\n");
    files_.push_back({{"file", name}, {"format", "json"}});
  }

  void csv(const std::string& name, const std::vector<std::string>& columns,
           const std::vector<std::vector<std::string>>& rows, const std::string& description = "") {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_field(columns[i]);
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
      os << "\n";
    }
    write(name, os.str());
    Json entry{{"file", name}, {"format", "csv"}, {"columns", columns}};
    if (!description.empty()) entry["description"] = description;
    files_.push_back(entry);
  }

  void raw_csv(const std::string& name, const std::string& body, const std::vector<std::string>& columns) {
    write(name, body);
    files_.push_back({{"file", name}, {"format", "csv"}, {"columns", columns}});
  }

  void finish(const Json& summary) {
    Json meta{{"pdwave_version", pdw_version()}, {"files", files_}, {"summary", summary}, {"config", config_}};
    write("metadata.json", meta.dump(2) + "\n");
  }

  const fs::path& dir() const { return dir_; }

 private:
  void write(const std::string& name, const std::string& body) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << body;
    if (!out) throw Failure{kNumerical, "failed to write " + (dir_ / name).string()};
  }

  fs::path dir_;
  Json config_;
  Json files_ = Json::array();
};

// ---------------------------------------------------------------------------
// Thin wrappers over the C API

std::vector<double> values_of(const pdw_profile* w) {
  std::vector<double> v(pdw_profile_size(w));
  check(pdw_profile_values(w, v.data(), v.size()), "profile values");
  return v;
}

std::vector<double> nodes(const pdw_grid* g) {
  double L = 0.0, h = 0.0;
  std::size_t N = 0;
  check(pdw_grid_info(g, &L, &N, &h), "grid");
  std::vector<double> x(N);
  for (std::size_t j = 0; j < N; ++j) x[j] = -L + static_cast<double>(j) * h;
  return x;
}

struct Solved {
  SolutionPtr solution;
  pdw_status status;
  pdw_solution_info info;
};

// The solver section may carry sweep-only keys; single solves ignore them.
Json solve_options(Json solver) {
  solver.erase("warm_start");
  solver.erase("warm_start_min_ratio");
  return solver;
}

Solved solve(const RunConfig& rc, double K, const Json& solver, const pdw_profile* start = nullptr) {
  pdw_solution* s = nullptr;
  const std::string opts = solve_options(solver).dump();
  const pdw_status st = pdw_solve(rc.coupling.get(), rc.grid.get(), K, opts.c_str(), start, &s);
  if (st != PDW_OK && st != PDW_ERR_NOT_CONVERGED) check(st, "solve at K=" + num(K));
  Solved out{SolutionPtr(s), st, {}};
  check(pdw_solution_info_get(s, &out.info), "solution info");
  return out;
}

Json solution_json(const pdw_solution* s, bool history) {
  char* j = nullptr;
  check(pdw_solution_to_json(s, history ? 1 : 0, &j), "solution json");
  return take_json(j);
}

ProfilePtr solution_profile(const pdw_solution* s) {
  pdw_profile* p = nullptr;
  check(pdw_solution_profile(s, &p), "solution profile");
  return ProfilePtr(p);
}

std::string profile_csv(const pdw_profile* w) {
  char* s = nullptr;
  check(pdw_profile_to_csv(w, &s), "profile csv");
  return take(s);
}

// Width of {x : |W(x)| >= frac * max|W|}.
double support_width(const std::vector<double>& x, const std::vector<double>& w, double frac) {
  double peak = 0.0;
  for (double v : w) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double h = x.size() > 1 ? x[1] - x[0] : 0.0;
  std::size_t count = 0;
  for (double v : w) count += std::abs(v) >= frac * peak ? 1 : 0;
  return static_cast<double>(count) * h;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("solve");
  allow_keys(sec, "solve", {"K", "history"});
  const double K = require_number(sec, "K", "solve");
  const bool history = sec.value("history", false);
  Solved r = solve(rc, K, rc.solver);
  Artifacts out(rc.output_dir, rc.resolved);
  Json body = solution_json(r.solution.get(), history);
  double eig = 0.0;
  check(pdw_solution_eigen_residual(r.solution.get(), rc.coupling.get(), &eig), "eigen residual");
  body["eigen_residual"] = eig;
  out.json("solution.json", body);
  ProfilePtr w = solution_profile(r.solution.get());
  out.raw_csv("profile.csv", profile_csv(w.get()), {"x", "value"});
  out.finish({{"K", K}, {"sigma2", r.info.sigma2}, {"P", r.info.P}, {"converged", r.info.converged != 0}});
  std::cout << "K=" << num(K) << " sigma2=" << num(r.info.sigma2) << " P=" << num(r.info.P)
            << " iterations=" << r.info.iterations << " residual=" << num(r.info.residual)
            << (r.info.converged ? "" : " (not converged)") << "\n";
  return r.info.converged ? kOk : kNotConverged;
}

struct SweepOutcome {
  Json rows;
  Json threshold;
  bool all_converged = true;
};

SweepOutcome run_sweep(const pdw_coupling* c, const pdw_grid* g, const std::vector<double>& K,
                       const Json& solver, double trigger, std::size_t refine_steps) {
  char* table = nullptr;
  check(pdw_sweep(c, g, K.data(), K.size(), solver.dump().c_str(), &table), "sweep");
  const std::string table_text = take(table);
  SweepOutcome o;
  o.rows = Json::parse(table_text).at("rows");
  char* th = nullptr;
  check(pdw_threshold_detect(table_text.c_str(), trigger, &th), "threshold");
  o.threshold = take_json(th);
  if (refine_steps > 0 && o.threshold.at("found").get<bool>()) {
    const Json solve_only = solve_options(solver);
    char* refined = nullptr;
    check(pdw_refine_threshold(c, g, solve_only.dump().c_str(), o.threshold.dump().c_str(), refine_steps,
                               &refined),
          "threshold refinement");
    o.threshold["refined"] = take_json(refined);
  }
  for (const auto& r : o.rows) o.all_converged = o.all_converged && r.at("status") == "converged";
  return o;
}

const std::vector<std::string> kSweepColumns = {"K",          "P",      "sigma",        "sigma2", "ratio",
                                                "residual",   "iterations", "status", "warm_started",
                                                "error"};

std::vector<std::vector<std::string>> sweep_rows_csv(const Json& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    const auto number = [&](const char* k) {
      return r.at(k).is_number() ? num(r.at(k).get<double>()) : r.at(k).get<std::string>();
    };
    out.push_back({number("K"), number("P"), number("sigma"), number("sigma2"), number("ratio"),
                   number("residual"), std::to_string(r.at("iterations").get<std::size_t>()),
                   r.at("status").get<std::string>(), r.at("warm_started").get<bool>() ? "true" : "false",
                   r.at("error").get<std::string>()});
  }
  return out;
}

int cmd_sweep(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("sweep");
  allow_keys(sec, "sweep", {"K", "trigger", "refine_steps"});
  if (!sec.contains("K")) config_error("missing sweep.K");
  const auto K = number_list(sec.at("K"), "sweep.K");
  const double trigger = get_number(sec, "trigger", "sweep", 2.0);
  const std::size_t refine = get_count(sec, "refine_steps", "sweep", 0);
  const SweepOutcome o = run_sweep(rc.coupling.get(), rc.grid.get(), K, rc.solver, trigger, refine);
  Artifacts out(rc.output_dir, rc.resolved);
  out.json("sweep.json", {{"rows", o.rows}, {"threshold", o.threshold}});
  out.csv("sweep.csv", kSweepColumns, sweep_rows_csv(o.rows));
  out.finish({{"threshold", o.threshold}, {"all_converged", o.all_converged}});
  for (const auto& r : o.rows) {
    std::cout << "K=" << num(r.at("K").get<double>()) << " ratio=" << r.at("ratio") << " status=" << r.at("status")
              << "\n";
  }
  std::cout << "threshold: " << o.threshold.dump() << "\n";
  return o.all_converged ? kOk : kNotConverged;
}

int cmd_dispersion(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("dispersion");
  allow_keys(sec, "dispersion", {"k_min", "k_max", "samples"});
  const double kmin = get_number(sec, "k_min", "dispersion", 0.0);
  const double kmax = get_number(sec, "k_max", "dispersion", 20.0);
  const std::size_t n = get_count(sec, "samples", "dispersion", 401);
  char* j = nullptr;
  check(pdw_dispersion(rc.coupling.get(), kmin, kmax, n, &j), "dispersion");
  const Json d = take_json(j);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < d.at("k").size(); ++i) {
    rows.push_back({num(d["k"][i].get<double>()), num(d["theta2"][i].get<double>()),
                    num(d["omega2"][i].get<double>())});
  }
  Artifacts out(rc.output_dir, rc.resolved);
  out.csv("dispersion.csv", {"k", "theta2", "omega2"}, rows);
  out.json("dispersion.json", {{"c0", d.at("c0")}, {"c_inf", d.at("c_inf")}, {"samples", n}});
  out.finish({{"c0", d.at("c0")}, {"c_inf", d.at("c_inf")}});
  std::cout << "theta2(0)=" << num(d.at("c0").get<double>()) << " omega2/k^2 limit=" << num(d.at("c_inf").get<double>())
            << "\n";
  return kOk;
}

int cmd_decay(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("decay");
  allow_keys(sec, "decay", {"K", "upper", "lower"});
  if (!sec.contains("K")) config_error("missing decay.K");
  const auto K = number_list(sec.at("K"), "decay.K");
  const double upper = get_number(sec, "upper", "decay", 1e-3);
  const double lower = get_number(sec, "lower", "decay", 1e-9);
  const bool reflected = get_text(rc.solver, "sign", "solver", "positive") == "reflected";
  Json results = Json::array();
  std::vector<std::vector<std::string>> rows;
  int code = kOk;
  for (double k : K) {
    Solved r = solve(rc, k, rc.solver);
    if (!r.info.converged) code = kNotConverged;
    ProfilePtr w = solution_profile(r.solution.get());
    if (reflected) {
      // Tails are fitted on the cone representative.
      auto v = values_of(w.get());
      for (double& x : v) x = -x;
      pdw_profile* p = nullptr;
      check(pdw_profile_create(rc.grid.get(), v.data(), v.size(), &p), "profile");
      w.reset(p);
    }
    double lam = 0.0;
    check(pdw_decay_rate(rc.coupling.get(), r.info.sigma2, &lam), "decay rate at K=" + num(k));
    double lo = 0.0, hi = 0.0;
    check(pdw_tail_window(w.get(), upper, lower, &lo, &hi), "tail window at K=" + num(k));
    char* fj = nullptr;
    check(pdw_fit_decay(w.get(), lo, hi, &fj), "decay fit at K=" + num(k));
    const Json fit = take_json(fj);
    const double fitted = fit.at("lambda").get<double>();
    const double rel = std::abs(fitted - lam) / lam;
    results.push_back({{"K", k},
                       {"sigma2", r.info.sigma2},
                       {"lambda_predicted", lam},
                       {"fit", fit},
                       {"relative_error", rel},
                       {"converged", r.info.converged != 0}});
    rows.push_back({num(k), num(r.info.sigma2), num(lam), num(fitted), num(rel), num(lo), num(hi)});
    std::cout << "K=" << num(k) << " lambda=" << num(lam) << " fitted=" << num(fitted) << "\n";
  }
  Artifacts out(rc.output_dir, rc.resolved);
  out.json("decay.json", {{"results", results}});
  out.csv("decay.csv", {"K", "sigma2", "lambda_predicted", "lambda_fit", "relative_error", "x_low", "x_high"}, rows);
  out.finish({{"waves", K.size()}});
  return code;
}

int cmd_kdv(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("kdv");
  allow_keys(sec, "kdv", {"eps", "c1"});
  const auto eps = number_list(sec.contains("eps") ? sec.at("eps") : Json::array({0.4, 0.2, 0.1}), "kdv.eps");
  const std::string which = get_text(sec, "c1", "kdv", "symbol");
  char* cj = nullptr;
  check(pdw_kdv_coefficients(rc.coupling.get(), &cj), "kdv coefficients");
  const Json coeffs = take_json(cj);
  const std::vector<double> x = nodes(rc.grid.get());
  Artifacts out(rc.output_dir, rc.resolved);
  Json results = Json::array();
  std::vector<std::vector<std::string>> rows;
  int code = kOk;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double e = eps[i];
    pdw_profile* pp = nullptr;
    double s2 = 0.0;
    check(pdw_kdv_profile(rc.coupling.get(), rc.grid.get(), e, which.c_str(), &pp, &s2), "kdv profile");
    ProfilePtr predicted(pp);
    double norm = 0.0;
    check(pdw_l2_norm(predicted.get(), &norm), "norm");
    const double K = 0.5 * norm * norm;
    Json solver = rc.solver;
    if (!solver.contains("initial_width")) solver["initial_width"] = 1.0 / e;
    Solved r = solve(rc, K, solver);
    if (!r.info.converged) code = kNotConverged;
    char* cmp = nullptr;
    check(pdw_kdv_compare(r.solution.get(), rc.coupling.get(), which.c_str(), &cmp), "kdv compare");
    Json c = take_json(cmp);
    c["K"] = K;
    c["converged"] = r.info.converged != 0;
    results.push_back(c);
    rows.push_back({num(e), num(K), num(c.at("sigma2").get<double>()), num(c.at("sigma2_predicted").get<double>()),
                    num(c.at("sup_error").get<double>()), num(c.at("l2_error").get<double>()),
                    num(c.at("amplitude_ratio").get<double>())});

    const auto w = values_of(solution_profile(r.solution.get()).get());
    const auto p = values_of(predicted.get());
    std::vector<std::vector<std::string>> prof;
    for (std::size_t j = 0; j < x.size(); ++j) prof.push_back({num(x[j]), num(w[j]), num(p[j])});
    out.csv("kdv_profile_" + std::to_string(i) + ".csv", {"x", "computed", "predicted"}, prof,
            "eps=" + num(e));
    std::cout << "eps=" << num(e) << " sup_error=" << num(c.at("sup_error").get<double>())
              << " amplitude_ratio=" << num(c.at("amplitude_ratio").get<double>()) << "\n";
  }
  out.json("kdv.json", {{"coefficients", coeffs}, {"c1", which}, {"results", results}});
  out.csv("kdv.csv", {"eps", "K", "sigma2", "sigma2_predicted", "sup_error", "l2_error", "amplitude_ratio"}, rows);
  out.finish({{"coefficients", coeffs}});
  return code;
}

struct SnapshotSink {
  std::ostringstream csv;
  const std::vector<double>* x;
};

void on_snapshot(double t, const double* u, const double* v, size_t n, void* user) {
  auto* sink = static_cast<SnapshotSink*>(user);
  for (size_t j = 0; j < n; ++j) {
    sink->csv << num(t) << ',' << num((*sink->x)[j]) << ',' << num(u[j]) << ',' << num(v[j]) << '\n';
  }
}

int cmd_simulate(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("simulate");
  allow_keys(sec, "simulate", {"K", "duration", "dt", "check_interval", "snapshot_interval"});
  const double K = require_number(sec, "K", "simulate");
  Json opts = sec;
  opts.erase("K");
  Solved r = solve(rc, K, rc.solver);
  if (!r.info.converged) {
    throw Failure{kNotConverged, "wave at K=" + num(K) + " did not converge; not launching"};
  }
  const std::vector<double> x = nodes(rc.grid.get());
  SnapshotSink sink{{}, &x};
  sink.csv << "t,x,u,v\n";
  const bool snapshots = get_count(sec, "snapshot_interval", "simulate", 0) > 0;
  char* rep = nullptr;
  const pdw_status st = pdw_simulate(r.solution.get(), rc.coupling.get(), opts.dump().c_str(),
                                     snapshots ? on_snapshot : nullptr, &sink, &rep);
  if (st != PDW_OK && st != PDW_ERR_NUMERICAL) check(st, "simulate");
  Json report = take_json(rep);
  Artifacts out(rc.output_dir, rc.resolved);
  out.json("simulate.json", {{"report", report}, {"wave", solution_json(r.solution.get(), false)}});
  if (snapshots) out.raw_csv("snapshots.csv", sink.csv.str(), {"t", "x", "u", "v"});
  out.finish({{"measured_speed", report.at("measured_speed")},
              {"expected_speed", report.at("expected_speed")},
              {"aborted", report.at("aborted")}});
  std::cout << "speed=" << report.at("measured_speed") << " expected=" << report.at("expected_speed")
            << " shape_error=" << report.at("shape_error") << " energy_drift=" << report.at("energy_drift")
            << "\n";
  if (st == PDW_ERR_NUMERICAL) {
    std::cerr << "simulate: " << report.at("message").get<std::string>() << "\n";
    return kNumerical;
  }
  return kOk;
}

// Even, nonincreasing-in-|x| random profile drawn from the seed.
std::vector<double> random_cone_values(const std::vector<double>& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = x.size();
  std::vector<double> level(n / 2 + 1);
  double acc = 0.0;
  for (std::size_t i = level.size(); i-- > 0;) {
    acc += u(rng) * u(rng);
    level[i] = acc;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t d = j >= n / 2 ? j - n / 2 : n / 2 - j;
    w[j] = level[std::min(d, level.size() - 1)];
  }
  return w;
}

int cmd_check(const RunConfig& rc) {
  const Json& sec = rc.resolved.at("check");
  allow_keys(sec, "check", {"K", "profile", "width", "r_max", "samples"});
  const double K = get_number(sec, "K", "check", 1.0);
  const std::string kind = get_text(sec, "profile", "check", "gaussian");
  const double width = get_number(sec, "width", "check", 0.0);
  const double r_max = get_number(sec, "r_max", "check", 2.0);
  const std::size_t samples = get_count(sec, "samples", "check", 201);

  pdw_profile* p = nullptr;
  if (kind == "random") {
    const auto x = nodes(rc.grid.get());
    const auto w = random_cone_values(x, rc.resolved.at("seed").get<std::uint64_t>());
    pdw_profile* raw = nullptr;
    check(pdw_profile_create(rc.grid.get(), w.data(), w.size(), &raw), "profile");
    ProfilePtr tmp(raw);
    double norm = 0.0;
    check(pdw_l2_norm(raw, &norm), "norm");
    std::vector<double> scaled = w;
    for (double& v : scaled) v *= std::sqrt(2.0 * K) / norm;
    check(pdw_profile_create(rc.grid.get(), scaled.data(), scaled.size(), &p), "profile");
  } else {
    check(pdw_profile_initial(rc.grid.get(), kind.c_str(), K, width, &p), "profile");
  }
  ProfilePtr w(p);
  char* ej = nullptr;
  check(pdw_energy_report(w.get(), rc.coupling.get(), &ej), "energy report");
  const Json energy = take_json(ej);
  char* sj = nullptr;
  check(pdw_superquadratic_check(rc.coupling.get(), r_max, samples, &sj), "superquadratic check");
  const Json sq = take_json(sj);
  char* cj = nullptr;
  check(pdw_cone_check(w.get(), 1e-8, &cj), "cone check");
  const Json cone = take_json(cj);
  Artifacts out(rc.output_dir, rc.resolved);
  out.json("check.json", {{"energy", energy}, {"superquadratic", sq}, {"cone", cone}, {"profile", kind}});
  out.raw_csv("check_profile.csv", profile_csv(w.get()), {"x", "value"});
  out.finish({{"energy", energy}});
  std::cout << energy.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Figure reproduction. Each preset is a fixed configuration; data files are
// listed with their columns in metadata.json.

Json discrete(const std::vector<std::pair<double, Json>>& bonds) {
  Json list = Json::array();
  for (const auto& [xi, phi] : bonds) list.push_back({{"xi", xi}, {"potential", phi}});
  return {{"coupling", "discrete"}, {"bonds", list}};
}

Json potential(const std::string& name, Json params = Json::object()) {
  return {{"name", name}, {"params", std::move(params)}};
}

struct Figure {
  Json config;
  CouplingPtr coupling;
  GridPtr grid;
};

Figure figure_setup(const Json& material, double L, std::size_t N) {
  Figure f;
  pdw_coupling* c = nullptr;
  check(pdw_coupling_from_json(material.dump().c_str(), &c), "material");
  f.coupling.reset(c);
  pdw_grid* g = nullptr;
  check(pdw_grid_create(L, N, &g), "grid");
  f.grid.reset(g);
  char* resolved = nullptr;
  check(pdw_coupling_to_json(c, &resolved), "material");
  f.config = {{"material", take_json(resolved)}, {"grid", {{"L", L}, {"N", N}}}};
  return f;
}

Solved figure_solve(const Figure& f, double K, const Json& solver) {
  pdw_solution* s = nullptr;
  const pdw_status st = pdw_solve(f.coupling.get(), f.grid.get(), K, solver.dump().c_str(), nullptr, &s);
  if (st != PDW_OK && st != PDW_ERR_NOT_CONVERGED) check(st, "solve at K=" + num(K));
  Solved out{SolutionPtr(s), st, {}};
  check(pdw_solution_info_get(s, &out.info), "solution info");
  return out;
}

// Columns x, then one per profile.
void profile_table(Artifacts& out, const std::string& name, const std::vector<double>& x,
                   const std::vector<std::string>& labels, const std::vector<std::vector<double>>& cols,
                   const std::string& description) {
  std::vector<std::string> header{"x"};
  header.insert(header.end(), labels.begin(), labels.end());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::vector<std::string> r{num(x[j])};
    for (const auto& c : cols) r.push_back(num(c[j]));
    rows.push_back(std::move(r));
  }
  out.csv(name, header, rows, description);
}

std::vector<double> distance_profile(const pdw_profile* w, double xi) {
  pdw_profile* a = nullptr;
  check(pdw_conv_spectral(w, xi, &a), "distance profile");
  ProfilePtr p(a);
  return values_of(p.get());
}

int sweep_figure(Artifacts& out, Json& summary, const Figure& f, const std::vector<double>& K_sweep,
                 const std::vector<double>& K_profiles, const Json& solver, double trigger) {
  const SweepOutcome o = run_sweep(f.coupling.get(), f.grid.get(), K_sweep, solver, trigger, 0);
  out.csv("sweep.csv", kSweepColumns, sweep_rows_csv(o.rows), "energy and speed against K");
  const auto x = nodes(f.grid.get());
  std::vector<std::string> labels;
  std::vector<std::vector<double>> cols;
  const Json solve_only = solve_options(solver);
  for (double K : K_profiles) {
    Solved r = figure_solve(f, K, solve_only);
    labels.push_back("W_K=" + num(K));
    cols.push_back(values_of(solution_profile(r.solution.get()).get()));
  }
  profile_table(out, "profiles.csv", x, labels, cols, "wave profiles, one column per K");
  summary["threshold"] = o.threshold;
  out.json("sweep.json", {{"rows", o.rows}, {"threshold", o.threshold}});
  std::cout << "threshold: " << o.threshold.dump() << "\n";
  return o.all_converged ? kOk : kNotConverged;
}

int reproduce(const std::string& fig, const fs::path& root) {
  const fs::path dir = root / fig;
  Json summary;
  int code = kOk;
  Json cfg{{"figure", fig}};

  if (fig == "fig1") {
    // Silling medium, negative profiles, several horizons.
    const std::vector<double> horizons{0.5, 1.0, 2.0};
    const std::vector<double> K{0.25, 0.5, 1.0, 2.0, 4.0};
    const Json solver{{"sign", "reflected"}, {"max_iterations", 20000}, {"initial_width", 1.0}};
    cfg["horizons"] = horizons;
    cfg["K"] = K;
    cfg["solver"] = solver;
    cfg["grid"] = {{"L", 20.0}, {"N", 1024}};
    Artifacts out(dir, cfg);
    std::vector<std::vector<std::string>> energy;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> cols;
    std::vector<double> x;
    for (double H : horizons) {
      Figure f = figure_setup({{"coupling", "silling"}, {"horizon", H}, {"xi_step", 0.02}}, 20.0, 1024);
      x = nodes(f.grid.get());
      for (double k : K) {
        Solved r = figure_solve(f, k, solver);
        if (!r.info.converged) code = kNotConverged;
        energy.push_back({num(H), num(k), num(r.info.P), num(std::sqrt(r.info.sigma2)), num(r.info.sigma2),
                          r.info.converged ? "true" : "false"});
        if (k == 1.0) {
          labels.push_back("W_H=" + num(H));
          cols.push_back(values_of(solution_profile(r.solution.get()).get()));
        }
      }
    }
    profile_table(out, "profiles.csv", x, labels, cols, "wave profiles at K=1, one column per horizon");
    out.csv("energy.csv", {"H", "K", "P", "sigma", "sigma2", "converged"}, energy,
            "potential energy and speed against K");
    out.finish(summary);
    return code;
  }
  if (fig == "fig2") {
    const Json phi = potential("poly26", {{"c2", 0.5}, {"c6", 1.0 / 6.0}});
    Figure f = figure_setup(discrete({{1.0, phi}, {2.0, phi}}), 5.0, 512);
    const Json solver{{"initial", "gaussian"}, {"initial_width", 0.1}, {"max_iterations", 50000}};
    std::vector<double> K;
    for (int i = 1; i <= 20; ++i) K.push_back(i / 40.0);
    cfg.update(f.config);
    cfg["solver"] = solver;
    cfg["K"] = K;
    Artifacts out(dir, cfg);
    code = sweep_figure(out, summary, f, K, {0.1, 0.2, 0.3, 0.4, 0.5}, solver, 2.0);
    out.finish(summary);
    return code;
  }
  if (fig == "fig3") {
    Figure f = figure_setup(discrete({{1.0, potential("pwlin")}}), 4.0, 512);
    const Json solver{{"initial", "gaussian"}, {"initial_width", 0.2}, {"max_iterations", 50000}};
    std::vector<double> K;
    for (int i = 10; i <= 30; ++i) K.push_back(i / 20.0);
    cfg.update(f.config);
    cfg["solver"] = solver;
    cfg["K"] = K;
    Artifacts out(dir, cfg);
    code = sweep_figure(out, summary, f, K, {0.5, 1.0, 1.1, 1.5}, solver, 2.0);
    out.finish(summary);
    return code;
  }
  if (fig == "fig4") {
    const std::vector<double> exponents{1.5, 2.5, 3.0, 4.0};
    const Json solver{{"max_iterations", 20000}};
    cfg["exponents"] = exponents;
    cfg["K"] = 1.0;
    cfg["grid"] = {{"L", 4.0}, {"N", 512}};
    cfg["solver"] = solver;
    Artifacts out(dir, cfg);
    std::vector<std::string> labels, dlabels;
    std::vector<std::vector<double>> cols, dcols;
    std::vector<double> x;
    for (double p : exponents) {
      Figure f = figure_setup(discrete({{1.0, potential("hertz", {{"p", p}})}}), 4.0, 512);
      x = nodes(f.grid.get());
      Solved r = figure_solve(f, 1.0, solver);
      if (!r.info.converged) code = kNotConverged;
      ProfilePtr w = solution_profile(r.solution.get());
      labels.push_back("W_p=" + num(p));
      cols.push_back(values_of(w.get()));
      dlabels.push_back("A1W_p=" + num(p));
      dcols.push_back(distance_profile(w.get(), 1.0));
    }
    profile_table(out, "profiles.csv", x, labels, cols, "wave profiles at K=1, one column per exponent");
    profile_table(out, "distance.csv", x, dlabels, dcols, "distance profiles A_1 W");
    out.finish(summary);
    return code;
  }
  if (fig == "fig5") {
    const Json fput = discrete({{1.0, potential("harmonic", {{"c", 0.5}})}});
    const Json smooth{{"coupling", "continuous"},
                      {"alpha", {{"name", "gaussian"}, {"params", {{"scale", 1.0}, {"length", 1.0}}}}},
                      {"beta", {{"name", "constant"}, {"params", {{"value", 1.0}}}}},
                      {"potential", potential("harmonic", {{"c", 0.5}})},
                      {"xi_max", 5.0},
                      {"xi_step", 0.01}};
    cfg["materials"] = {{"fput", fput}, {"smooth", smooth}};
    cfg["k"] = {{"k_min", 0.0}, {"k_max", 30.0}, {"samples", 601}};
    Artifacts out(dir, cfg);
    for (const auto& [name, material] : {std::pair{"fput", fput}, std::pair{"smooth", smooth}}) {
      pdw_coupling* c = nullptr;
      check(pdw_coupling_from_json(material.dump().c_str(), &c), "material");
      CouplingPtr cp(c);
      char* j = nullptr;
      check(pdw_dispersion(c, 0.0, 30.0, 601, &j), "dispersion");
      const Json d = take_json(j);
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < d.at("k").size(); ++i) {
        rows.push_back({num(d["k"][i].get<double>()), num(d["theta2"][i].get<double>()),
                        num(d["omega2"][i].get<double>())});
      }
      out.csv(std::string("dispersion_") + name + ".csv", {"k", "theta2", "omega2"}, rows);
      summary[name] = {{"c0", d.at("c0")}, {"c_inf", d.at("c_inf")}};
    }
    out.finish(summary);
    return code;
  }
  if (fig == "fig6") {
    const std::vector<double> K{1.0, 10.0, 100.0};
    const Json solver{{"max_iterations", 50000}, {"initial_width", 1.0}};
    cfg["K"] = K;
    cfg["grid"] = {{"L", 10.0}, {"N", 1024}};
    cfg["solver"] = solver;
    Artifacts out(dir, cfg);
    for (const std::string family : {"beta_one", "beta_inverse"}) {
      std::vector<std::pair<double, Json>> bonds;
      for (int m = 1; m <= 5; ++m) {
        const double beta = family == "beta_one" ? 1.0 : 1.0 / m;
        bonds.push_back({double(m), potential("cosh", {{"beta", beta}})});
      }
      Figure f = figure_setup(discrete(bonds), 10.0, 1024);
      const auto x = nodes(f.grid.get());
      std::vector<std::string> labels;
      std::vector<std::vector<double>> cols;
      std::vector<std::vector<std::string>> stats;
      for (double k : K) {
        Solved r = figure_solve(f, k, solver);
        if (!r.info.converged) code = kNotConverged;
        ProfilePtr w = solution_profile(r.solution.get());
        const auto v = values_of(w.get());
        labels.push_back("W_K=" + num(k));
        cols.push_back(v);
        stats.push_back({num(k), num(r.info.sigma2), num(r.info.localization_ratio),
                         num(support_width(x, v, 0.01)), r.info.converged ? "true" : "false"});
        std::vector<std::string> dl;
        std::vector<std::vector<double>> dc;
        for (int m = 1; m <= 5; ++m) {
          dl.push_back("A" + std::to_string(m) + "W");
          dc.push_back(distance_profile(w.get(), m));
        }
        profile_table(out, family + "_distance_K" + num(k) + ".csv", x, dl, dc,
                      "distance profiles A_m W at K=" + num(k));
      }
      profile_table(out, family + "_profiles.csv", x, labels, cols, "wave profiles, one column per K");
      out.csv(family + "_stats.csv", {"K", "sigma2", "ratio", "width_1pct", "converged"}, stats);
    }
    out.finish(summary);
    return code;
  }
  config_error("unknown figure '" + fig + "', expected fig1 to fig6");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdwave: traveling waves in peridynamical media"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pdw_version()));

  std::string config_path, out_dir, figure;
  int threads = 0;
  std::string chosen;
  for (const auto& name : kCommands) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("-o,--output", out_dir, "output directory (overrides config and PDWAVE_OUTPUT_DIR)");
    sub->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* rep = app.add_subcommand("reproduce", "emit plot data for a figure preset");
  rep->add_option("figure", figure, "fig1 .. fig6")->required();
  rep->add_option("-o,--output", out_dir, "output root (default: reproduce)");
  rep->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
  rep->callback([&chosen] { chosen = "reproduce"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }

  try {
    if (chosen == "reproduce") {
      fs::path root = out_dir;
      if (root.empty()) {
        const char* env = std::getenv("PDWAVE_OUTPUT_DIR");
        root = env && *env ? env : "reproduce";
      }
      return reproduce(figure, root);
    }
    RunConfig rc = resolve(load_config(config_path), chosen, out_dir, threads);
    if (chosen == "solve") return cmd_solve(rc);
    if (chosen == "sweep") return cmd_sweep(rc);
    if (chosen == "dispersion") return cmd_dispersion(rc);
    if (chosen == "decay") return cmd_decay(rc);
    if (chosen == "kdv") return cmd_kdv(rc);
    if (chosen == "simulate") return cmd_simulate(rc);
    return cmd_check(rc);
  } catch (const Failure& f) {
    std::cerr << "pdwave " << chosen << ": " << f.message << "\n";
    return f.code;
  } catch (const Json::exception& e) {
    std::cerr << "pdwave " << chosen << ": config: " << e.what() << "\n";
    return kInput;
  }
}
