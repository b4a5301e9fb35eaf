#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pdwave/energy.hpp"
#include "pdwave/grid.hpp"
#include "pdwave/material.hpp"

namespace pdwave {

enum class InitialKind { Gaussian, Indicator, Supplied };
enum class ConeSign { Positive, Reflected };

struct SolveOptions {
  std::size_t max_iterations = 5000;
  double tol_residual = 1e-10;        // on ||T(W) - W|| / ||W||
  double tol_stagnation = 1e-14;      // relative P increment
  std::size_t stagnation_window = 200;
  InitialKind initial = InitialKind::Gaussian;
  double initial_width = 0.0;  // 0 selects L/10 (gaussian) or L/20 (indicator)
  ConeSign sign = ConeSign::Positive;
  bool record_history = false;
  Convolution convolution = Convolution::Spectral;
  double cone_tolerance = 1e-8;
  std::optional<Profile> supplied;
};

struct IterationRecord {
  double P;
  double K;
  double mu;
  double residual;
  double increment;   // P(W_{n+1}) - P(W_n)
  double gain_bound;  // ||W_{n+1} - W_n||^2 / (2 mu_n)
  double cone_defect;  // largest cone defect of W_n relative to ||W_n||
};

enum class SolveStatus { Converged, MaxIterations, Stagnated };

const char* to_string(SolveStatus s);

struct WaveSolution {
  Profile profile;
  double K = 0.0;
  double sigma2 = 0.0;
  double P = 0.0;
  double Q = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  // min over steps of P_{n+1} - P_n and of P_{n+1} - P_n - gain_bound
  double min_increment = 0.0;
  double min_gain_margin = 0.0;
  ConeReport cone{};
  SolveStatus status = SolveStatus::MaxIterations;
  ConeSign sign = ConeSign::Positive;
  std::vector<IterationRecord> history{};

  bool converged() const noexcept { return status == SolveStatus::Converged; }
  double sigma() const;
  /// ||sigma^2 W - dP(W)|| / (sigma^2 ||W||), recomputed from the profile.
  double eigen_residual(const Coupling& c) const;
  /// The profile in the positive cone (negated for reflected solves).
  Profile cone_profile() const;
};

/// Cone member with K(W) = K: a gaussian exp(-x^2/w^2) or the indicator of
/// [-w, w], rescaled.
Profile initial_profile(InitialKind kind, double K, const Grid& grid,
                        double width = 0.0);

/// Rescale a nonzero profile to K(W) = K.
Profile rescale_to(const Profile& w, double K);

struct ImprovementStep {
  Profile next;
  double mu;
};

/// T(W) = mu(W) dP(W) with mu(W) = ||W|| / ||dP(W)||.
ImprovementStep improvement_step(const Profile& w, const Coupling& c);
ImprovementStep improvement_step(const Profile& w, const EnergyFunctional& f);

WaveSolution solve(double K, const Coupling& c, const Grid& grid,
                   const SolveOptions& opts = {});

struct SweepOptions {
  SolveOptions solve;
  bool warm_start = true;
  // Only localized predecessors are reused: a constant profile is a fixed
  // point for every K and would pin the sweep to the constant branch.
  double warm_start_min_ratio = 1.5;
};

struct SweepRow {
  double K = 0.0;
  double P = 0.0;
  double sigma = 0.0;
  double sigma2 = 0.0;
  double ratio = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;
  bool warm_started = false;
  std::string error;

  bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<WaveSolution> solutions;  // one per successful row
};

SweepResult sweep_K(const std::vector<double>& K_values, const Coupling& c,
                    const Grid& grid, const SweepOptions& opts = {});

struct ThresholdResult {
  bool found = false;
  double K_low = 0.0;
  double K_high = 0.0;
  double K_estimate = 0.0;
  double trigger = 2.0;
  std::string note;
};

/// First bracket in which the localization ratio crosses the trigger.
ThresholdResult threshold_detect(const std::vector<SweepRow>& rows,
                                 double trigger = 2.0);

/// Bisection of a bracket by fresh solves from the configured initial profile.
ThresholdResult refine_threshold(const Coupling& c, const Grid& grid,
                                 const SolveOptions& opts,
                                 ThresholdResult bracket, std::size_t steps);

}  // namespace pdwave
