#include "pdwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdwave/error.hpp"

namespace pdwave {

namespace {

constexpr double kDegenerateNorm = 1e-300;

double relative_cone_defect(const Profile& w) {
  const ConeReport r = cone_check(w, 0.0);
  return r.norm > 0.0 ? r.max_defect() / r.norm : 0.0;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Stagnated: return "slow_convergence";
  }
  return "unknown";
}

double WaveSolution::sigma() const { return std::sqrt(sigma2); }

Profile WaveSolution::cone_profile() const {
  return sign == ConeSign::Reflected ? -profile : profile;
}

double WaveSolution::eigen_residual(const Coupling& c) const {
  const Profile g = grad_P(profile, c);
  const Profile r = sigma2 * profile - g;
  return l2_norm(r) / (sigma2 * l2_norm(profile));
}

Profile rescale_to(const Profile& w, double K) {
  require(K > 0.0, "constraint value must be positive, got " + std::to_string(K));
  const double norm = l2_norm(w);
  if (!(norm > 0.0)) fail(ErrorCode::Degenerate, "cannot rescale the zero profile");
  return w * (std::sqrt(2.0 * K) / norm);
}

Profile initial_profile(InitialKind kind, double K, const Grid& grid,
                        double width) {
  require(K > 0.0, "constraint value must be positive, got " + std::to_string(K));
  const double L = grid.half_length();
  switch (kind) {
    case InitialKind::Gaussian: {
      const double w = width > 0.0 ? width : L / 10.0;
      return rescale_to(
          Profile::from_function(grid, [w](double x) { return std::exp(-(x * x) / (w * w)); }),
          K);
    }
    case InitialKind::Indicator: {
      const double w = width > 0.0 ? width : L / 20.0;
      const double edge = w * (1.0 + 1e-12);
      return rescale_to(
          Profile::from_function(grid, [edge](double x) { return std::abs(x) <= edge ? 1.0 : 0.0; }),
          K);
    }
    case InitialKind::Supplied:
      break;
  }
  fail(ErrorCode::InvalidArgument, "a supplied initial profile must be passed explicitly");
}

ImprovementStep improvement_step(const Profile& w, const EnergyFunctional& f) {
  const Profile g = f.gradient(w);
  const double gnorm = l2_norm(g);
  if (!(gnorm >= kDegenerateNorm)) {
    fail(ErrorCode::Degenerate, "gradient of P vanishes; the improvement step is undefined");
  }
  const double mu = l2_norm(w) / gnorm;
  return {g * mu, mu};
}

ImprovementStep improvement_step(const Profile& w, const Coupling& c) {
  return improvement_step(w, EnergyFunctional(c, w.grid()));
}

WaveSolution solve(double K, const Coupling& c, const Grid& grid,
                   const SolveOptions& opts) {
  require(K > 0.0, "constraint value must be positive, got " + std::to_string(K));
  require(opts.tol_residual > 0.0 && opts.tol_stagnation > 0.0,
          "solver tolerances must be positive");

  const bool reflect = opts.sign == ConeSign::Reflected;
  const EnergyFunctional f(reflect ? c.reflected() : c, grid, opts.convolution);

  Profile w = [&] {
    if (opts.initial == InitialKind::Supplied) {
      require(opts.supplied.has_value(), "supplied initial profile is missing");
      require(opts.supplied->grid() == grid, "supplied profile is on another grid");
      return rescale_to(reflect ? -*opts.supplied : *opts.supplied, K);
    }
    return initial_profile(opts.initial, K, grid, opts.initial_width);
  }();

  const double target_norm = std::sqrt(2.0 * K);
  EnergyEvaluation current = f.evaluate(w);

  WaveSolution sol{.profile = w};
  sol.K = K;
  sol.sign = opts.sign;
  sol.min_increment = std::numeric_limits<double>::infinity();
  sol.min_gain_margin = std::numeric_limits<double>::infinity();

  std::size_t stall = 0;
  double stall_residual = 0.0;
  double mu = 0.0;
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0;; ++it) {
    const double gnorm = l2_norm(current.gradient);
    if (!(gnorm >= kDegenerateNorm)) {
      fail(ErrorCode::Degenerate,
           "gradient of P vanishes at iteration " + std::to_string(it));
    }
    mu = l2_norm(w) / gnorm;
    Profile next = current.gradient * mu;
    const double step = l2_norm(next - w);
    residual = step / l2_norm(w);

    if (residual <= opts.tol_residual) {
      sol.status = SolveStatus::Converged;
      sol.iterations = it;
      break;
    }
    if (it >= opts.max_iterations) {
      sol.status = SolveStatus::MaxIterations;
      sol.iterations = it;
      break;
    }

    next *= target_norm / l2_norm(next);
    EnergyEvaluation upcoming = f.evaluate(next);
    const double increment = upcoming.potential - current.potential;
    const double bound = 0.5 * step * step / mu;
    sol.min_increment = std::min(sol.min_increment, increment);
    sol.min_gain_margin = std::min(sol.min_gain_margin, increment - bound);

    if (opts.record_history) {
      sol.history.push_back({current.potential, kinetic_K(w), mu, residual,
                             increment, bound, relative_cone_defect(w)});
    }

    if (std::abs(increment) <= opts.tol_stagnation * std::abs(current.potential)) {
      if (stall == 0) stall_residual = residual;
      if (++stall >= opts.stagnation_window && residual > 0.9 * stall_residual) {
        sol.status = SolveStatus::Stagnated;
        sol.iterations = it;
        break;
      }
      if (stall >= opts.stagnation_window) stall = 0;
    } else {
      stall = 0;
    }

    w = std::move(next);
    current = std::move(upcoming);
  }

  if (!std::isfinite(sol.min_increment)) {
    sol.min_increment = 0.0;
    sol.min_gain_margin = 0.0;
  }
  sol.residual = residual;
  sol.sigma2 = 1.0 / mu;
  sol.P = current.potential;
  sol.Q = f.quadratic(w);
  sol.cone = cone_check(w, opts.cone_tolerance);
  sol.profile = reflect ? -w : w;
  return sol;
}

SweepResult sweep_K(const std::vector<double>& K_values, const Coupling& c,
                    const Grid& grid, const SweepOptions& opts) {
  for (std::size_t i = 0; i < K_values.size(); ++i) {
    require(K_values[i] > 0.0, "sweep constraint values must be positive");
    if (i > 0) require(K_values[i] > K_values[i - 1], "sweep constraint values must increase");
  }
  SweepResult out;
  std::optional<WaveSolution> previous;
  for (double K : K_values) {
    SweepRow row;
    row.K = K;
    SolveOptions so = opts.solve;
    if (opts.warm_start && previous &&
        localization_ratio(previous->cone_profile()) >= opts.warm_start_min_ratio) {
      so.initial = InitialKind::Supplied;
      so.supplied = previous->profile;
      row.warm_started = true;
    }
    try {
      WaveSolution s = solve(K, c, grid, so);
      row.P = s.P;
      row.sigma2 = s.sigma2;
      row.sigma = s.sigma();
      row.ratio = localization_ratio(s.cone_profile());
      row.residual = s.residual;
      row.iterations = s.iterations;
      row.status = s.status;
      previous = s;
      out.solutions.push_back(std::move(s));
    } catch (const Error& e) {
      row.error = e.what();
      previous.reset();
    }
    out.rows.push_back(row);
  }
  return out;
}

ThresholdResult threshold_detect(const std::vector<SweepRow>& rows, double trigger) {
  ThresholdResult r;
  r.trigger = trigger;
  const SweepRow* prev = nullptr;
  bool any_below = false;
  bool any_above = false;
  for (const auto& row : rows) {
    if (!row.ok()) continue;
    (row.ratio >= trigger ? any_above : any_below) = true;
    if (prev && prev->ratio < trigger && row.ratio >= trigger) {
      r.found = true;
      r.K_low = prev->K;
      r.K_high = row.K;
      const double t = (trigger - prev->ratio) / (row.ratio - prev->ratio);
      r.K_estimate = prev->K + t * (row.K - prev->K);
      return r;
    }
    prev = &row;
  }
  if (!any_below && any_above) {
    r.note = "localized at every K in range";
  } else if (any_below && !any_above) {
    r.note = "constant-like at every K in range";
  } else if (!any_below && !any_above) {
    r.note = "no successful rows";
  } else {
    r.note = "no upward crossing in range";
  }
  return r;
}

ThresholdResult refine_threshold(const Coupling& c, const Grid& grid,
                                 const SolveOptions& opts,
                                 ThresholdResult bracket, std::size_t steps) {
  require(bracket.found, "refinement needs a bracketing interval");
  for (std::size_t i = 0; i < steps; ++i) {
    const double mid = 0.5 * (bracket.K_low + bracket.K_high);
    const WaveSolution s = solve(mid, c, grid, opts);
    if (localization_ratio(s.cone_profile()) >= bracket.trigger) {
      bracket.K_high = mid;
    } else {
      bracket.K_low = mid;
    }
  }
  bracket.K_estimate = 0.5 * (bracket.K_low + bracket.K_high);
  return bracket;
}

}  // namespace pdwave
