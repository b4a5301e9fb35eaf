#include "pdwave/pdwave.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <algorithm>
#include <string>

#include "pdwave/analysis.hpp"
#include "pdwave/error.hpp"
#include "pdwave/io.hpp"
#include "pdwave/solver.hpp"
#include "pdwave/spectral.hpp"
#include "pdwave/timedomain.hpp"

using pdwave::io::Json;

struct pdw_grid {
  pdwave::Grid value;
};
struct pdw_coupling {
  pdwave::Coupling value;
};
struct pdw_profile {
  pdwave::Profile value;
};
struct pdw_solution {
  pdwave::WaveSolution value;
};

namespace {

thread_local std::string g_last_error;

pdw_status status_for(pdwave::ErrorCode code) {
  using pdwave::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::GridMismatch:
    case ErrorCode::Config:
      return PDW_ERR_INPUT;
    case ErrorCode::Overflow:
    case ErrorCode::Instability:
      return PDW_ERR_NUMERICAL;
    case ErrorCode::Degenerate:
      return PDW_ERR_DEGENERATE;
    case ErrorCode::NotConverged:
      return PDW_ERR_NOT_CONVERGED;
    case ErrorCode::Subsonic:
      return PDW_ERR_SUBSONIC;
  }
  return PDW_ERR_INTERNAL;
}

template <class F>
pdw_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const pdwave::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("json: ") + e.what();
    return PDW_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PDW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PDW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PDW_ERR_INTERNAL;
  }
}

pdw_status input_error(const char* what) {
  g_last_error = what;
  return PDW_ERR_INPUT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* dump(const Json& j) { return copy_string(j.dump()); }

Json parse_or_null(const char* json) {
  if (!json || !*json) return Json();
  return Json::parse(json);
}

pdwave::KdvConstant kdv_constant(const char* which) {
  if (!which || std::strcmp(which, "symbol") == 0) return pdwave::KdvConstant::Symbol;
  if (std::strcmp(which, "moment") == 0) return pdwave::KdvConstant::Moment;
  pdwave::fail(pdwave::ErrorCode::InvalidArgument, "c1 choice must be 'symbol' or 'moment'");
}

}  // namespace

#define PDW_REQUIRE(cond)                              \
  do {                                                 \
    if (!(cond)) return input_error("null argument: " #cond); \
  } while (0)

extern "C" {

const char* pdw_version(void) { return "0.1.0"; }

const char* pdw_status_string(pdw_status s) {
  switch (s) {
    case PDW_OK: return "ok";
    case PDW_ERR_INPUT: return "input error";
    case PDW_ERR_NOT_CONVERGED: return "not converged";
    case PDW_ERR_NUMERICAL: return "numerical failure";
    case PDW_ERR_DEGENERATE: return "degenerate";
    case PDW_ERR_SUBSONIC: return "subsonic";
    case PDW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pdw_last_error_message(void) { return g_last_error.c_str(); }

void pdw_string_free(char* s) { std::free(s); }

pdw_status pdw_grid_create(double L, size_t N, pdw_grid** out) {
  PDW_REQUIRE(out);
  return guarded([&] {
    *out = new pdw_grid{pdwave::make_grid(L, N)};
    return PDW_OK;
  });
}

void pdw_grid_destroy(pdw_grid* g) { delete g; }

pdw_status pdw_grid_info(const pdw_grid* g, double* L, size_t* N, double* h) {
  PDW_REQUIRE(g);
  if (L) *L = g->value.half_length();
  if (N) *N = g->value.size();
  if (h) *h = g->value.spacing();
  return PDW_OK;
}

pdw_status pdw_coupling_from_json(const char* json, pdw_coupling** out) {
  PDW_REQUIRE(json && out);
  return guarded([&] {
    *out = new pdw_coupling{pdwave::io::coupling_from_json(Json::parse(json))};
    return PDW_OK;
  });
}

pdw_status pdw_coupling_to_json(const pdw_coupling* c, char** json) {
  PDW_REQUIRE(c && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(c->value));
    return PDW_OK;
  });
}

void pdw_coupling_destroy(pdw_coupling* c) { delete c; }

pdw_status pdw_superquadratic_check(const pdw_coupling* c, double r_max, size_t samples,
                                    char** json) {
  PDW_REQUIRE(c && json);
  return guarded([&] {
    pdwave::require(r_max > 0.0 && samples > 0, "need r_max > 0 and samples > 0");
    Json out = Json::array();
    if (c->value.is_discrete()) {
      for (const auto& b : c->value.discrete().bonds) {
        Json r = pdwave::io::to_json(pdwave::check_superquadratic(b.phi, r_max, samples));
        r["xi"] = b.xi;
        r["potential"] = pdwave::io::to_json(b.phi);
        out.push_back(r);
      }
    } else {
      const auto& phi = c->value.continuous().phi;
      Json r = pdwave::io::to_json(pdwave::check_superquadratic(phi, r_max, samples));
      r["potential"] = pdwave::io::to_json(phi);
      out.push_back(r);
    }
    *json = dump(out);
    return PDW_OK;
  });
}

pdw_status pdw_profile_create(const pdw_grid* g, const double* values, size_t n,
                              pdw_profile** out) {
  PDW_REQUIRE(g && values && out);
  return guarded([&] {
    pdwave::require(n == g->value.size(), "value count does not match the grid");
    *out = new pdw_profile{pdwave::Profile(g->value, std::vector<double>(values, values + n))};
    return PDW_OK;
  });
}

pdw_status pdw_profile_initial(const pdw_grid* g, const char* kind, double K, double width,
                               pdw_profile** out) {
  PDW_REQUIRE(g && kind && out);
  return guarded([&] {
    pdwave::InitialKind k;
    if (std::strcmp(kind, "gaussian") == 0) {
      k = pdwave::InitialKind::Gaussian;
    } else if (std::strcmp(kind, "indicator") == 0) {
      k = pdwave::InitialKind::Indicator;
    } else {
      pdwave::fail(pdwave::ErrorCode::InvalidArgument, "initial kind must be gaussian or indicator");
    }
    *out = new pdw_profile{pdwave::initial_profile(k, K, g->value, width)};
    return PDW_OK;
  });
}

void pdw_profile_destroy(pdw_profile* w) { delete w; }

size_t pdw_profile_size(const pdw_profile* w) { return w ? w->value.size() : 0; }

pdw_status pdw_profile_values(const pdw_profile* w, double* out, size_t n) {
  PDW_REQUIRE(w && out);
  if (n != w->value.size()) return input_error("buffer size does not match the profile");
  const auto v = w->value.values();
  std::copy(v.begin(), v.end(), out);
  return PDW_OK;
}

pdw_status pdw_profile_to_json(const pdw_profile* w, char** json) {
  PDW_REQUIRE(w && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(w->value));
    return PDW_OK;
  });
}

pdw_status pdw_profile_to_csv(const pdw_profile* w, char** csv) {
  PDW_REQUIRE(w && csv);
  return guarded([&] {
    *csv = copy_string(pdwave::io::profile_csv(w->value));
    return PDW_OK;
  });
}

pdw_status pdw_profile_from_json(const char* json, pdw_profile** out) {
  PDW_REQUIRE(json && out);
  return guarded([&] {
    *out = new pdw_profile{pdwave::io::profile_from_json(Json::parse(json))};
    return PDW_OK;
  });
}

pdw_status pdw_l2_norm(const pdw_profile* w, double* out) {
  PDW_REQUIRE(w && out);
  *out = pdwave::l2_norm(w->value);
  return PDW_OK;
}

pdw_status pdw_inner(const pdw_profile* a, const pdw_profile* b, double* out) {
  PDW_REQUIRE(a && b && out);
  return guarded([&] {
    *out = pdwave::inner(a->value, b->value);
    return PDW_OK;
  });
}

pdw_status pdw_conv_spectral(const pdw_profile* w, double xi, pdw_profile** out) {
  PDW_REQUIRE(w && out);
  return guarded([&] {
    *out = new pdw_profile{pdwave::conv_spectral(w->value, xi)};
    return PDW_OK;
  });
}

pdw_status pdw_conv_direct(const pdw_profile* w, double xi, pdw_profile** out) {
  PDW_REQUIRE(w && out);
  return guarded([&] {
    *out = new pdw_profile{pdwave::conv_direct(w->value, xi)};
    return PDW_OK;
  });
}

pdw_status pdw_cone_check(const pdw_profile* w, double tol, char** json) {
  PDW_REQUIRE(w && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::cone_check(w->value, tol)));
    return PDW_OK;
  });
}

pdw_status pdw_potential_P(const pdw_profile* w, const pdw_coupling* c, double* out) {
  PDW_REQUIRE(w && c && out);
  return guarded([&] {
    *out = pdwave::potential_P(w->value, c->value);
    return PDW_OK;
  });
}

pdw_status pdw_grad_P(const pdw_profile* w, const pdw_coupling* c, pdw_profile** out) {
  PDW_REQUIRE(w && c && out);
  return guarded([&] {
    *out = new pdw_profile{pdwave::grad_P(w->value, c->value)};
    return PDW_OK;
  });
}

pdw_status pdw_energy_report(const pdw_profile* w, const pdw_coupling* c, char** json) {
  PDW_REQUIRE(w && c && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::energy_report(w->value, c->value)));
    return PDW_OK;
  });
}

pdw_status pdw_solve(const pdw_coupling* c, const pdw_grid* g, double K,
                     const char* options_json, const pdw_profile* start, pdw_solution** out) {
  PDW_REQUIRE(c && g && out);
  *out = nullptr;
  return guarded([&] {
    pdwave::SolveOptions o = pdwave::io::solve_options_from_json(parse_or_null(options_json));
    if (start) {
      o.supplied = start->value;
      o.initial = pdwave::InitialKind::Supplied;
    }
    auto* s = new pdw_solution{pdwave::solve(K, c->value, g->value, o)};
    *out = s;
    if (!s->value.converged()) {
      g_last_error = std::string("solve stopped with status ") + pdwave::to_string(s->value.status) +
                     " after " + std::to_string(s->value.iterations) + " iterations, residual " +
                     pdwave::io::format_double(s->value.residual);
      return PDW_ERR_NOT_CONVERGED;
    }
    return PDW_OK;
  });
}

void pdw_solution_destroy(pdw_solution* s) { delete s; }

pdw_status pdw_solution_info_get(const pdw_solution* s, pdw_solution_info* out) {
  PDW_REQUIRE(s && out);
  return guarded([&] {
    const auto& v = s->value;
    *out = {v.K,
            v.sigma2,
            v.P,
            v.Q,
            v.residual,
            v.min_increment,
            v.min_gain_margin,
            pdwave::localization_ratio(v.cone_profile()),
            v.iterations,
            v.converged() ? 1 : 0};
    return PDW_OK;
  });
}

pdw_status pdw_solution_profile(const pdw_solution* s, pdw_profile** out) {
  PDW_REQUIRE(s && out);
  return guarded([&] {
    *out = new pdw_profile{s->value.profile};
    return PDW_OK;
  });
}

pdw_status pdw_solution_eigen_residual(const pdw_solution* s, const pdw_coupling* c,
                                       double* out) {
  PDW_REQUIRE(s && c && out);
  return guarded([&] {
    *out = s->value.eigen_residual(c->value);
    return PDW_OK;
  });
}

pdw_status pdw_solution_to_json(const pdw_solution* s, int with_history, char** json) {
  PDW_REQUIRE(s && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(s->value, with_history != 0));
    return PDW_OK;
  });
}

pdw_status pdw_sweep(const pdw_coupling* c, const pdw_grid* g, const double* K, size_t n,
                     const char* options_json, char** table_json) {
  PDW_REQUIRE(c && g && K && table_json);
  return guarded([&] {
    const pdwave::SweepOptions o = pdwave::io::sweep_options_from_json(parse_or_null(options_json));
    const auto result = pdwave::sweep_K(std::vector<double>(K, K + n), c->value, g->value, o);
    Json rows = Json::array();
    for (const auto& r : result.rows) rows.push_back(pdwave::io::to_json(r));
    *table_json = dump(Json{{"rows", rows}});
    return PDW_OK;
  });
}

pdw_status pdw_threshold_detect(const char* table_json, double trigger, char** result_json) {
  PDW_REQUIRE(table_json && result_json);
  return guarded([&] {
    Json j = Json::parse(table_json);
    if (j.is_object() && j.contains("rows")) j = j.at("rows");
    const auto rows = pdwave::io::sweep_rows_from_json(j);
    *result_json = dump(pdwave::io::to_json(pdwave::threshold_detect(rows, trigger)));
    return PDW_OK;
  });
}

pdw_status pdw_refine_threshold(const pdw_coupling* c, const pdw_grid* g,
                                const char* options_json, const char* bracket_json,
                                size_t steps, char** result_json) {
  PDW_REQUIRE(c && g && bracket_json && result_json);
  return guarded([&] {
    const pdwave::SolveOptions o = pdwave::io::solve_options_from_json(parse_or_null(options_json));
    const auto bracket = pdwave::io::threshold_from_json(Json::parse(bracket_json));
    const auto r = pdwave::refine_threshold(c->value, g->value, o, bracket, steps);
    *result_json = dump(pdwave::io::to_json(r));
    return PDW_OK;
  });
}

pdw_status pdw_theta2(const pdw_coupling* c, double k, double* out) {
  PDW_REQUIRE(c && out);
  return guarded([&] {
    *out = pdwave::theta2(k, c->value);
    return PDW_OK;
  });
}

pdw_status pdw_omega2(const pdw_coupling* c, double k, double* out) {
  PDW_REQUIRE(c && out);
  return guarded([&] {
    *out = pdwave::omega2(k, c->value);
    return PDW_OK;
  });
}

pdw_status pdw_theta2_imag(const pdw_coupling* c, double lambda, double* out) {
  PDW_REQUIRE(c && out);
  return guarded([&] {
    *out = pdwave::theta2_imag(lambda, c->value);
    return PDW_OK;
  });
}

pdw_status pdw_dispersion(const pdw_coupling* c, double k_min, double k_max, size_t samples,
                          char** json) {
  PDW_REQUIRE(c && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::dispersion_curve(c->value, k_min, k_max, samples)));
    return PDW_OK;
  });
}

pdw_status pdw_decay_rate(const pdw_coupling* c, double sigma2, double* out) {
  PDW_REQUIRE(c && out);
  return guarded([&] {
    *out = pdwave::decay_rate(sigma2, c->value);
    return PDW_OK;
  });
}

pdw_status pdw_fit_decay(const pdw_profile* w, double x_low, double x_high, char** json) {
  PDW_REQUIRE(w && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::fit_decay(w->value, x_low, x_high)));
    return PDW_OK;
  });
}

pdw_status pdw_tail_window(const pdw_profile* w, double upper, double lower, double* x_low,
                           double* x_high) {
  PDW_REQUIRE(w && x_low && x_high);
  return guarded([&] {
    const auto [a, b] = pdwave::tail_window(w->value, upper, lower);
    *x_low = a;
    *x_high = b;
    return PDW_OK;
  });
}

pdw_status pdw_kdv_coefficients(const pdw_coupling* c, char** json) {
  PDW_REQUIRE(c && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::kdv_coefficients(c->value)));
    return PDW_OK;
  });
}

pdw_status pdw_kdv_profile(const pdw_coupling* c, const pdw_grid* g, double eps,
                           const char* which, pdw_profile** out, double* sigma2) {
  PDW_REQUIRE(c && g && out);
  return guarded([&] {
    auto p = pdwave::kdv_profile(eps, c->value, g->value, kdv_constant(which));
    if (sigma2) *sigma2 = p.sigma2;
    *out = new pdw_profile{std::move(p.profile)};
    return PDW_OK;
  });
}

pdw_status pdw_kdv_compare(const pdw_solution* s, const pdw_coupling* c, const char* which,
                           char** json) {
  PDW_REQUIRE(s && c && json);
  return guarded([&] {
    *json = dump(pdwave::io::to_json(pdwave::kdv_compare(s->value, c->value, kdv_constant(which))));
    return PDW_OK;
  });
}

pdw_status pdw_simulate(const pdw_solution* s, const pdw_coupling* c, const char* options_json,
                        pdw_snapshot_fn on_snapshot, void* user, char** report_json) {
  PDW_REQUIRE(s && c && report_json);
  return guarded([&] {
    const Json j = parse_or_null(options_json);
    double duration = 10.0;
    double dt = 1e-3;
    pdwave::SimulateOptions o;
    if (!j.is_null()) {
      for (const auto& [k, v] : j.items()) {
        if (k == "duration") {
          duration = v.get<double>();
        } else if (k == "dt") {
          dt = v.get<double>();
        } else if (k == "check_interval") {
          o.check_interval = v.get<std::size_t>();
        } else if (k == "snapshot_interval") {
          o.snapshot_interval = v.get<std::size_t>();
        } else {
          pdwave::fail(pdwave::ErrorCode::Config, "unknown simulate option '" + k + "'");
        }
      }
    }
    o.expected_speed = s->value.sigma();
    if (on_snapshot) {
      o.on_snapshot = [&](const pdwave::SimulationState& st) {
        on_snapshot(st.time, st.u.values().data(), st.v.values().data(), st.u.size(), user);
      };
    }
    pdwave::SimulationState state = pdwave::launch_wave(s->value);
    const auto rep = pdwave::simulate(state, c->value, duration, dt, o);
    *report_json = dump(pdwave::io::to_json(rep));
    if (rep.aborted) {
      g_last_error = rep.message;
      return PDW_ERR_NUMERICAL;
    }
    return PDW_OK;
  });
}

}  // extern "C"
