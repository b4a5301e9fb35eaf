#pragma once

#include <complex>
#include <vector>

#include "pdwave/grid.hpp"
#include "pdwave/material.hpp"

namespace pdwave {

enum class Convolution { Spectral, Direct };

struct EnergyEvaluation {
  double potential;
  Profile gradient;
};

/// P(W) = sum over bond terms of weight * integral Phi(scale * A_xi W) dx and
/// its L2 gradient sum of weight * scale * A_xi Phi'(scale * A_xi W).
///
/// The spectral route transforms W once, then performs one inverse and one
/// forward transform per bond term. The direct route uses conv_direct and is
/// kept as an oracle; both are exact gradients of their own discrete P because
/// either discrete A_xi is a symmetric circulant.
class EnergyFunctional {
 public:
  EnergyFunctional(Coupling coupling, const Grid& grid,
                   Convolution method = Convolution::Spectral);

  const Coupling& coupling() const noexcept { return coupling_; }
  const Grid& grid() const noexcept { return grid_; }

  double potential(const Profile& w) const;
  Profile gradient(const Profile& w) const;
  EnergyEvaluation evaluate(const Profile& w) const;
  double quadratic(const Profile& w) const;

 private:
  EnergyEvaluation evaluate_impl(const Profile& w, bool want_gradient) const;
  std::vector<Profile> averages(const Profile& w) const;
  void check_arguments(const Profile& a, const BondTerm& t) const;

  Coupling coupling_;
  Grid grid_;
  Convolution method_;
  std::vector<std::vector<double>> symbols_;
};

double kinetic_K(const Profile& w);
double potential_P(const Profile& w, const Coupling& c);
Profile grad_P(const Profile& w, const Coupling& c);
double quadratic_Q(const Profile& w, const Coupling& c);

struct EnergyReport {
  double P = 0.0;
  double K = 0.0;
  double Q = 0.0;
  double sigma2_candidate = 0.0;   // ||dP(W)|| / ||W||
  double superquadratic_gap = 0.0;  // <dP(W), W> - 2 P(W)
};

EnergyReport energy_report(const Profile& w, const Coupling& c);

}  // namespace pdwave
