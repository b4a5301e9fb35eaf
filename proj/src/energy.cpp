#include "pdwave/energy.hpp"

#include <cmath>
#include <sstream>

#include "pdwave/error.hpp"
#include "pdwave/spectral.hpp"

namespace pdwave {

EnergyFunctional::EnergyFunctional(Coupling coupling, const Grid& grid,
                                   Convolution method)
    : coupling_(std::move(coupling)), grid_(grid), method_(method) {
  if (method_ == Convolution::Spectral) {
    const std::size_t modes = grid_.size() / 2 + 1;
    symbols_.reserve(coupling_.terms().size());
    for (const auto& t : coupling_.terms()) {
      std::vector<double> s(modes);
      for (std::size_t n = 0; n < modes; ++n) {
        s[n] = symbol_A(t.xi, grid_.wavenumber(n));
      }
      symbols_.push_back(std::move(s));
    }
  } else {
    require(coupling_.max_bond_length() <= grid_.period(),
            "direct convolution needs all bonds shorter than the period");
  }
}

void EnergyFunctional::check_arguments(const Profile& a, const BondTerm& t) const {
  const double limit = t.phi.max_argument();
  if (!std::isfinite(limit)) return;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double r = t.scale * a[j];
    if (std::abs(r) > limit) {
      std::ostringstream os;
      os << "potential " << t.phi.name() << " overflows at node " << j
         << " (x = " << grid_.node(j) << ") for bond xi = " << t.xi
         << ": argument " << r << " exceeds " << limit;
      fail(ErrorCode::Overflow, os.str());
    }
  }
}

std::vector<Profile> EnergyFunctional::averages(const Profile& w) const {
  require(w.grid() == grid_, "profile grid does not match the energy grid");
  std::vector<Profile> out;
  const auto& terms = coupling_.terms();
  out.reserve(terms.size());
  if (method_ == Convolution::Direct) {
    for (const auto& t : terms) out.push_back(conv_direct(w, t.xi));
    return out;
  }
  Fft& fft = fft_for(grid_.size());
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  std::vector<std::complex<double>> tmp(fft.spectrum_size());
  fft.forward(w.values(), spec);
  for (std::size_t m = 0; m < terms.size(); ++m) {
    for (std::size_t n = 0; n < spec.size(); ++n) tmp[n] = spec[n] * symbols_[m][n];
    Profile a(grid_);
    fft.inverse(tmp, a.values());
    out.push_back(std::move(a));
  }
  return out;
}

EnergyEvaluation EnergyFunctional::evaluate_impl(const Profile& w,
                                                 bool want_gradient) const {
  require(w.grid() == grid_, "profile grid does not match the energy grid");
  const auto& terms = coupling_.terms();
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();

  Fft& fft = fft_for(n);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  std::vector<std::complex<double>> tmp(fft.spectrum_size());
  std::vector<std::complex<double>> acc(fft.spectrum_size(), 0.0);
  if (method_ == Convolution::Spectral) fft.forward(w.values(), spec);

  double potential = 0.0;
  Profile grad(grid_);
  Profile a(grid_);
  Profile force(grid_);
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const BondTerm& t = terms[m];
    if (method_ == Convolution::Spectral) {
      for (std::size_t k = 0; k < spec.size(); ++k) tmp[k] = spec[k] * symbols_[m][k];
      fft.inverse(tmp, a.values());
    } else {
      a = conv_direct(w, t.xi);
    }
    check_arguments(a, t);

    double p = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = t.scale * a[j];
      p += t.phi.value(r);
      force[j] = t.phi.d1(r);
    }
    potential += t.weight * h * p;
    if (!want_gradient) continue;

    const double factor = t.weight * t.scale;
    if (method_ == Convolution::Spectral) {
      fft.forward(force.values(), tmp);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += factor * symbols_[m][k] * tmp[k];
    } else {
      const Profile af = conv_direct(force, t.xi);
      for (std::size_t j = 0; j < n; ++j) grad[j] += factor * af[j];
    }
  }
  if (want_gradient && method_ == Convolution::Spectral) {
    fft.inverse(acc, grad.values());
  }
  if (!std::isfinite(potential) || (want_gradient && !grad.all_finite())) {
    fail(ErrorCode::Overflow, "potential energy evaluation is not finite");
  }
  return {potential, std::move(grad)};
}

double EnergyFunctional::potential(const Profile& w) const {
  return evaluate_impl(w, false).potential;
}

Profile EnergyFunctional::gradient(const Profile& w) const {
  return evaluate_impl(w, true).gradient;
}

EnergyEvaluation EnergyFunctional::evaluate(const Profile& w) const {
  return evaluate_impl(w, true);
}

double EnergyFunctional::quadratic(const Profile& w) const {
  const auto avg = averages(w);
  const auto& terms = coupling_.terms();
  double q = 0.0;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const BondTerm& t = terms[m];
    double s = 0.0;
    for (std::size_t j = 0; j < avg[m].size(); ++j) s += avg[m][j] * avg[m][j];
    q += 0.5 * t.phi.curvature_at_zero() * t.weight * t.scale * t.scale *
         grid_.spacing() * s;
  }
  return q;
}

double kinetic_K(const Profile& w) {
  const double n = l2_norm(w);
  return 0.5 * n * n;
}

double potential_P(const Profile& w, const Coupling& c) {
  return EnergyFunctional(c, w.grid()).potential(w);
}

Profile grad_P(const Profile& w, const Coupling& c) {
  return EnergyFunctional(c, w.grid()).gradient(w);
}

double quadratic_Q(const Profile& w, const Coupling& c) {
  return EnergyFunctional(c, w.grid()).quadratic(w);
}

EnergyReport energy_report(const Profile& w, const Coupling& c) {
  const EnergyFunctional f(c, w.grid());
  const auto e = f.evaluate(w);
  EnergyReport r;
  r.P = e.potential;
  r.K = kinetic_K(w);
  r.Q = f.quadratic(w);
  const double norm = l2_norm(w);
  r.sigma2_candidate = norm > 0.0 ? l2_norm(e.gradient) / norm : 0.0;
  r.superquadratic_gap = inner(e.gradient, w) - 2.0 * r.P;
  return r;
}

}  // namespace pdwave
