#include <doctest.h>

#include <cmath>

#include "pdwave/analysis.hpp"
#include "pdwave/energy.hpp"
#include "pdwave/error.hpp"
#include "pdwave/solver.hpp"
#include "pdwave/spectral.hpp"

using namespace pdwave;

namespace {

Coupling fput() { return Coupling(make_discrete({{1.0, Potential::harmonic(0.5)}})); }

Coupling smooth_fput() { return Coupling(make_discrete({{1.0, Potential::polyseries({0.5, 1.0 / 6.0})}})); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("FPUT dispersion") {
  for (double k = 0.0; k < 20.0; k += 0.37) {
    const double s = sinc(k / 2.0);
    CHECK(std::abs(theta2(k, fput()) - s * s) < 1e-12);
    CHECK(std::abs(omega2(k, fput()) - 4.0 * std::pow(std::sin(k / 2.0), 2)) < 1e-12);
  }
  CHECK(std::abs(theta2(2.0 * M_PI, fput())) < 1e-15);
  CHECK(omega2(0.0, fput()) == 0.0);
  CHECK(theta2(0.0, fput()) == doctest::Approx(sound_speed2(fput())));
}

TEST_CASE("continuous medium dispersion") {
  const Coupling box(build_quadrature(CoefficientFunction::constant(1.0), CoefficientFunction::constant(1.0),
                                      Potential::harmonic(0.5), 1.0, 1e-3));
  CHECK(std::abs(theta2(0.0, box) - 1.0 / 3.0) < 1e-6);
  CHECK(omega2_limit(box) == doctest::Approx(2.0).epsilon(1e-12));

  const Coupling reg(build_quadrature(CoefficientFunction::gaussian(1.0, 1.0), CoefficientFunction::constant(1.0),
                                      Potential::harmonic(0.5), 6.0, 1e-3));
  const double c_inf = omega2_limit(reg);
  CHECK(std::abs(omega2(200.0, reg) - c_inf) < 0.02 * c_inf);
  const DispersionCurve d = dispersion_curve(reg, 0.0, 10.0, 11);
  REQUIRE(d.k.size() == 11);
  CHECK(d.k.back() == doctest::Approx(10.0));
  CHECK(d.theta2[3] == doctest::Approx(theta2(3.0, reg)));
  CHECK(d.c0 == doctest::Approx(theta2(0.0, reg)));
}

TEST_CASE("imaginary-axis dispersion and decay rate") {
  CHECK(theta2_imag(0.0, fput()) == doctest::Approx(theta2(0.0, fput())));
  CHECK(theta2_imag(2.0, fput()) == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-14));
  double prev = theta2_imag(0.0, fput());
  for (double lam = 0.1; lam < 10.0; lam += 0.1) {
    const double t = theta2_imag(lam, fput());
    CHECK(t > prev);
    prev = t;
  }
  CHECK(std::abs(decay_rate(std::pow(std::sinh(1.0), 2), fput()) - 2.0) < 1e-10);
  const Coupling p(make_discrete({{1.0, Potential::poly26(0.5, 1.0 / 6.0)}, {2.0, Potential::poly26(0.5, 1.0 / 6.0)}}));
  for (double lam : {0.05, 0.7, 3.0, 12.0}) {
    CHECK(decay_rate(theta2_imag(lam, p), p) == doctest::Approx(lam).epsilon(1e-10));
  }
  CHECK(code_of([] { (void)decay_rate(1.0, fput()); }) == ErrorCode::Subsonic);
  CHECK(code_of([] { (void)theta2_imag(1500.0, fput()); }) == ErrorCode::Overflow);
}

TEST_CASE("exponential tail fits") {
  const Grid g(20.0, 4096);
  const Profile e = Profile::from_function(g, [](double x) { return std::exp(-3.0 * std::abs(x)); });
  CHECK(fit_decay(e, 1.0, 5.0).lambda == doctest::Approx(3.0).epsilon(1e-6));
  const Profile s = Profile::from_function(g, [](double x) { return std::pow(1.0 / std::cosh(x / 2.0), 2); });
  CHECK(fit_decay(s, 5.0, 10.0).lambda == doctest::Approx(1.0).epsilon(0.02));
  const auto [lo, hi] = tail_window(s);
  CHECK(lo > 0.0);
  CHECK(hi > lo);
}

TEST_CASE("converged wave decays at the predicted rate") {
  const Coupling p(make_discrete({{1.0, Potential::poly26(0.5, 1.0 / 6.0)}, {2.0, Potential::poly26(0.5, 1.0 / 6.0)}}));
  const Grid g(20.0, 2048);
  SolveOptions o;
  o.initial_width = 1.0;
  const WaveSolution s = solve(1.0, p, g, o);
  REQUIRE(s.converged());
  const auto [lo, hi] = tail_window(s.profile);
  const double fitted = fit_decay(s.profile, lo, hi).lambda;
  const double predicted = decay_rate(s.sigma2, p);
  CHECK(std::abs(fitted - predicted) / predicted < 0.05);
}

TEST_CASE("KdV coefficients") {
  const Coupling s = Coupling(silling_medium(1.0, 0.5, -1.0 / 6.0, 1e-4)).reflected();
  const KdvCoefficients k = kdv_coefficients(s);
  CHECK(k.c2 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(k.c1_moment == doctest::Approx(0.125).epsilon(1e-6));
  CHECK(k.c1_symbol == doctest::Approx(0.125 / 6.0).epsilon(1e-6));
  CHECK(k.c0 == doctest::Approx(0.5).epsilon(1e-6));

  const KdvCoefficients f = kdv_coefficients(smooth_fput());
  CHECK(f.c1_symbol == doctest::Approx(1.0 / 12.0));
  CHECK(f.c2 == doctest::Approx(0.5));
  CHECK(f.c1_moment > 0.0);
  CHECK(code_of([] { (void)kdv_coefficients(fput()); }) == ErrorCode::Degenerate);
}

TEST_CASE("KdV profile") {
  const Grid g(80.0, 1024);
  const double eps = 0.2;
  const KdvPrediction p = kdv_profile(eps, smooth_fput(), g);
  CHECK(p.peak == doctest::Approx(eps * eps * 3.0 / (2.0 * 0.5)));
  CHECK(p.profile[g.center()] == doctest::Approx(p.peak));
  CHECK(p.sigma2 == doctest::Approx(1.0 + eps * eps));
  CHECK(cone_check(p.profile, 1e-14).max_defect() == 0.0);
  const auto [lo, hi] = tail_window(p.profile);
  CHECK(fit_decay(p.profile, lo, hi).lambda == doctest::Approx(eps / std::sqrt(p.c1)).epsilon(0.01));
}

TEST_CASE("KdV trend on an epsilon ladder") {
  const Coupling c = smooth_fput();
  const Grid g(80.0, 1024);
  double prev = 1e300;
  for (double eps : {0.4, 0.2}) {
    SolveOptions o;
    o.initial_width = 1.0 / eps;
    const double K = kinetic_K(kdv_profile(eps, c, g).profile);
    const WaveSolution s = solve(K, c, g, o);
    REQUIRE(s.converged());
    const KdvComparison r = kdv_compare(s, c);
    CHECK(r.sup_error < prev);
    CHECK(std::abs(r.amplitude_ratio - 1.0) < 0.1);
    prev = r.sup_error;
  }
}

TEST_CASE("KdV comparison needs a supersonic wave") {
  const Grid g(5.0, 128);
  const WaveSolution s = solve(0.5, fput(), g);
  CHECK(code_of([&] { (void)kdv_compare(s, fput()); }) == ErrorCode::Subsonic);
  const Coupling c = smooth_fput();
  WaveSolution fake = s;
  fake.sigma2 = theta2(0.0, c);
  CHECK(code_of([&] { (void)kdv_compare(fake, c); }) == ErrorCode::Subsonic);
}
