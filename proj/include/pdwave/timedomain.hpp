#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdwave/grid.hpp"
#include "pdwave/material.hpp"
#include "pdwave/solver.hpp"

namespace pdwave {

/// Displacement u with u(y + 2L) = u(y) + offset, velocity v and time t.
struct SimulationState {
  Profile u;
  Profile v;
  double offset = 0.0;
  double time = 0.0;
  // Force at the current u, reused by the next Verlet step.
  std::optional<Profile> acceleration{};
};

/// Right-hand side of the nonlocal wave equation on the periodic grid.
///
/// Bond differences u(y + xi) - u(y) are taken as (S_xi - I) p + offset*xi/2L,
/// where p is the periodic part of u and S_xi the spectral shift.
class Dynamics {
 public:
  Dynamics(Coupling coupling, const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const Coupling& coupling() const noexcept { return coupling_; }

  Profile force(const Profile& u, double offset) const;
  double potential_energy(const Profile& u, double offset) const;
  double kinetic_energy(const Profile& v) const;
  double energy(const SimulationState& s) const;
  /// Largest linearized Omega^2 over the grid modes.
  double max_omega2() const;
  /// 0.5 * 2 / sqrt(max Omega^2).
  double stable_dt() const;

 private:
  std::vector<Profile> strains(const Profile& u, double offset) const;

  Coupling coupling_;
  Grid grid_;
  std::vector<std::vector<std::complex<double>>> shifts_;  // e^{i k xi} per term
};

Profile force(const Profile& u, double offset, const Coupling& c);

/// One velocity-Verlet step (dt may be negative).
void step_verlet(SimulationState& s, double dt, const Dynamics& d);

/// u = antiderivative of W with u(-L) = 0, offset = h * sum W, v = -sigma W.
SimulationState launch_wave(const WaveSolution& sol);

/// Spectral shift of a periodic profile: result(x) = w(x - distance).
Profile shift_profile(const Profile& w, double distance);

/// Distance d (mod 2L, refined below the grid spacing) maximizing the
/// correlation of b with a shifted by d.
double correlation_shift(const Profile& a, const Profile& b);

struct PropagationReport {
  double duration = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double expected_speed = 0.0;
  double measured_speed = 0.0;
  double speed_error = 0.0;  // relative to expected_speed (0 if none)
  double shift = 0.0;
  double shape_error = 0.0;
  double energy_initial = 0.0;
  double energy_final = 0.0;
  double energy_drift = 0.0;  // max relative deviation seen at checks
  bool aborted = false;
  std::string message;
};

struct SimulateOptions {
  std::size_t check_interval = 100;
  std::size_t snapshot_interval = 0;  // 0 disables the callback
  double expected_speed = 0.0;
  std::function<void(const SimulationState&)> on_snapshot;
};

/// Integrates to time + duration. Speed comes from cross-correlation shifts
/// between successive check points; an instability aborts with a partial
/// report instead of throwing.
PropagationReport simulate(SimulationState& s, const Coupling& c,
                           double duration, double dt,
                           const SimulateOptions& opts = {});

}  // namespace pdwave
