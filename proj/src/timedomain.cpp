#include "pdwave/timedomain.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pdwave/error.hpp"
#include "pdwave/spectral.hpp"

namespace pdwave {

namespace {

using Spectrum = std::vector<std::complex<double>>;

Spectrum transform(const Profile& w) {
  Fft& fft = fft_for(w.size());
  Spectrum s(fft.spectrum_size());
  fft.forward(w.values(), s);
  return s;
}

Profile inverse(const Grid& g, const Spectrum& s) {
  Profile out(g);
  fft_for(g.size()).inverse(s, out.values());
  return out;
}

// e^{i k d}, with the Nyquist slot reduced to its real part so that the
// operator stays real.
std::complex<double> phase(const Grid& g, std::size_t n, double d) {
  const double k = g.wavenumber(n);
  if (n == g.size() / 2) return {std::cos(k * d), 0.0};
  return std::polar(1.0, k * d);
}

double wrap_signed(double d, double period) {
  d = std::fmod(d, period);
  if (d > 0.5 * period) d -= period;
  if (d <= -0.5 * period) d += period;
  return d;
}

}  // namespace

Dynamics::Dynamics(Coupling coupling, const Grid& grid)
    : coupling_(std::move(coupling)), grid_(grid) {
  const std::size_t modes = grid_.size() / 2 + 1;
  for (const auto& t : coupling_.terms()) {
    std::vector<std::complex<double>> s(modes);
    for (std::size_t n = 0; n < modes; ++n) s[n] = phase(grid_, n, t.xi);
    shifts_.push_back(std::move(s));
  }
}

std::vector<Profile> Dynamics::strains(const Profile& u, double offset) const {
  require(u.grid() == grid_, "displacement grid does not match the dynamics grid");
  const double L = grid_.half_length();
  Profile p(grid_);
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = u[j] - offset * (grid_.node(j) + L) / (2.0 * L);
  }
  const Spectrum ps = transform(p);
  Spectrum tmp(ps.size());
  std::vector<Profile> out;
  const auto& terms = coupling_.terms();
  out.reserve(terms.size());
  for (std::size_t m = 0; m < terms.size(); ++m) {
    for (std::size_t n = 0; n < ps.size(); ++n) tmp[n] = ps[n] * (shifts_[m][n] - 1.0);
    Profile r = inverse(grid_, tmp);
    const double ramp = offset * terms[m].xi / (2.0 * L);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += ramp;
    out.push_back(std::move(r));
  }
  return out;
}

Profile Dynamics::force(const Profile& u, double offset) const {
  const auto r = strains(u, offset);
  const auto& terms = coupling_.terms();
  Fft& fft = fft_for(grid_.size());
  Spectrum acc(fft.spectrum_size(), 0.0);
  Spectrum tmp(fft.spectrum_size());
  Profile f(grid_);
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const BondTerm& t = terms[m];
    const double limit = t.phi.max_argument();
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double arg = t.scale * r[m][j];
      if (std::abs(arg) > limit) {
        std::ostringstream os;
        os << "bond strain " << arg << " at node " << j << " overflows potential "
           << t.phi.name();
        fail(ErrorCode::Overflow, os.str());
      }
      f[j] = t.phi.d1(arg);
    }
    fft.forward(f.values(), tmp);
    const double factor = t.weight * t.scale;
    for (std::size_t n = 0; n < acc.size(); ++n) {
      acc[n] += factor * (1.0 - std::conj(shifts_[m][n])) * tmp[n];
    }
  }
  Profile out = inverse(grid_, acc);
  if (!out.all_finite()) fail(ErrorCode::Overflow, "force evaluation is not finite");
  return out;
}

double Dynamics::potential_energy(const Profile& u, double offset) const {
  const auto r = strains(u, offset);
  const auto& terms = coupling_.terms();
  double e = 0.0;
  for (std::size_t m = 0; m < terms.size(); ++m) {
    double s = 0.0;
    for (std::size_t j = 0; j < r[m].size(); ++j) s += terms[m].phi.value(terms[m].scale * r[m][j]);
    e += terms[m].weight * grid_.spacing() * s;
  }
  return e;
}

double Dynamics::kinetic_energy(const Profile& v) const {
  return 0.5 * inner(v, v);
}

double Dynamics::energy(const SimulationState& s) const {
  return kinetic_energy(s.v) + potential_energy(s.u, s.offset);
}

double Dynamics::max_omega2() const {
  const auto& terms = coupling_.terms();
  double best = 0.0;
  for (std::size_t n = 0; n < grid_.size() / 2 + 1; ++n) {
    double w = 0.0;
    for (std::size_t m = 0; m < terms.size(); ++m) {
      const BondTerm& t = terms[m];
      w += t.weight * t.scale * t.scale * t.phi.curvature_at_zero() *
           std::norm(shifts_[m][n] - 1.0);
    }
    best = std::max(best, w);
  }
  return best;
}

double Dynamics::stable_dt() const {
  const double w2 = max_omega2();
  return w2 > 0.0 ? 1.0 / std::sqrt(w2) : std::numeric_limits<double>::infinity();
}

Profile force(const Profile& u, double offset, const Coupling& c) {
  return Dynamics(c, u.grid()).force(u, offset);
}

void step_verlet(SimulationState& s, double dt, const Dynamics& d) {
  require(dt != 0.0 && std::isfinite(dt), "time step must be finite and nonzero");
  if (!s.acceleration) s.acceleration = d.force(s.u, s.offset);
  const double half = 0.5 * dt;
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    s.v[j] += half * (*s.acceleration)[j];
    s.u[j] += dt * s.v[j];
  }
  s.acceleration = d.force(s.u, s.offset);
  for (std::size_t j = 0; j < s.v.size(); ++j) s.v[j] += half * (*s.acceleration)[j];
  s.time += dt;
}

SimulationState launch_wave(const WaveSolution& sol) {
  const Profile& w = sol.profile;
  const Grid& g = w.grid();
  const std::size_t n = g.size();
  Spectrum s = transform(w);
  for (std::size_t k = 1; k < n / 2; ++k) s[k] /= std::complex<double>(0.0, g.wavenumber(k));
  s[0] = 0.0;
  s[n / 2] = 0.0;
  Profile p = inverse(g, s);
  const double offset = g.spacing() * w.sum();
  const double L = g.half_length();
  const double p0 = p[0];
  Profile u(g);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = p[j] - p0 + offset * (g.node(j) + L) / (2.0 * L);
  }
  return {std::move(u), -sol.sigma() * w, offset, 0.0};
}

Profile shift_profile(const Profile& w, double distance) {
  const Grid& g = w.grid();
  Spectrum s = transform(w);
  for (std::size_t n = 0; n < s.size(); ++n) s[n] *= phase(g, n, -distance);
  return inverse(g, s);
}

double correlation_shift(const Profile& a, const Profile& b) {
  require_same_grid(a, b);
  const Grid& g = a.grid();
  const std::size_t n = g.size();
  const Spectrum sa = transform(a);
  const Spectrum sb = transform(b);
  Spectrum z(sa.size());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = sb[k] * std::conj(sa[k]);

  const Profile coarse = inverse(g, z);
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (coarse[j] > coarse[best]) best = j;
  }
  double d = static_cast<double>(best) * g.spacing();

  // Newton on the trigonometric correlation C(d) = sum w_k Re(z_k e^{i k d}).
  for (int it = 0; it < 30; ++it) {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 1; k < z.size(); ++k) {
      const double wk = (k == n / 2) ? 1.0 : 2.0;
      const double kk = g.wavenumber(k);
      const std::complex<double> e = z[k] * phase(g, k, d);
      d1 += -wk * kk * e.imag();
      d2 += -wk * kk * kk * e.real();
    }
    if (!(d2 < 0.0)) break;
    double step = -d1 / d2;
    if (std::abs(step) > g.spacing()) step = std::copysign(g.spacing(), step);
    d += step;
    if (std::abs(step) < 1e-14 * g.period()) break;
  }
  d = std::fmod(d, g.period());
  if (d < 0.0) d += g.period();
  return d;
}

PropagationReport simulate(SimulationState& s, const Coupling& c,
                           double duration, double dt,
                           const SimulateOptions& opts) {
  require(duration > 0.0 && std::isfinite(duration), "duration must be positive");
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  require(opts.check_interval > 0, "check interval must be positive");
  const Grid& g = s.u.grid();
  require(s.v.grid() == g, "velocity and displacement grids differ");
  const Dynamics d(c, g);

  PropagationReport rep;
  rep.duration = duration;
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
  rep.dt = duration / static_cast<double>(steps);
  rep.expected_speed = opts.expected_speed;

  rep.energy_initial = d.energy(s);
  rep.energy_final = rep.energy_initial;
  const double e_scale = rep.energy_initial != 0.0 ? std::abs(rep.energy_initial) : 1.0;
  const Profile v0 = s.v;
  Profile v_prev = s.v;
  double norm_prev = l2_norm(s.v);
  const double norm_floor = std::max(norm_prev, std::sqrt(2.0 * std::abs(rep.energy_initial)));
  const bool track = norm_prev > 0.0;
  double accumulated = 0.0;
  const double t0 = s.time;

  if (opts.on_snapshot && opts.snapshot_interval > 0) opts.on_snapshot(s);

  try {
    for (std::size_t i = 1; i <= steps; ++i) {
      step_verlet(s, rep.dt, d);
      rep.steps = i;
      if (opts.on_snapshot && opts.snapshot_interval > 0 && i % opts.snapshot_interval == 0) {
        opts.on_snapshot(s);
      }
      if (i % opts.check_interval != 0 && i != steps) continue;

      const double norm = l2_norm(s.v);
      if (!s.v.all_finite() || !s.u.all_finite() || norm > 10.0 * std::max(norm_prev, norm_floor)) {
        std::ostringstream os;
        os << "instability at t = " << s.time << ": velocity norm " << norm;
        fail(ErrorCode::Instability, os.str());
      }
      const double e = d.energy(s);
      rep.energy_final = e;
      rep.energy_drift = std::max(rep.energy_drift, std::abs(e - rep.energy_initial) / e_scale);
      if (track) {
        accumulated += wrap_signed(correlation_shift(v_prev, s.v), g.period());
        v_prev = s.v;
      }
      norm_prev = norm;
    }
  } catch (const Error& e) {
    rep.aborted = true;
    rep.message = e.what();
  }

  const double elapsed = s.time - t0;
  if (track && !rep.aborted && elapsed > 0.0) {
    const double direct = correlation_shift(v0, s.v);
    rep.shift = accumulated + wrap_signed(direct - accumulated, g.period());
    rep.measured_speed = rep.shift / elapsed;
    rep.shape_error = l2_norm(s.v - shift_profile(v0, rep.shift)) / l2_norm(v0);
  }
  if (rep.expected_speed != 0.0) {
    rep.speed_error = std::abs(rep.measured_speed - rep.expected_speed) / std::abs(rep.expected_speed);
  }
  return rep;
}

}  // namespace pdwave
