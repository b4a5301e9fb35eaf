#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdwave/error.hpp"
#include "pdwave/grid.hpp"
#include "pdwave/spectral.hpp"

using namespace pdwave;
using std::numbers::pi;

namespace {

Profile random_profile(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Profile w(g);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = n(rng);
  return w;
}

}  // namespace

TEST_CASE("grid spacing and nodes") {
  const Grid g(1.0, 8);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.node(0) == doctest::Approx(-1.0));
  CHECK(g.node(7) == doctest::Approx(0.75));
  CHECK(g.node(g.center()) == 0.0);
  // -L and L are the same point of the period.
  CHECK(g.node(7) + g.spacing() - g.node(0) == doctest::Approx(g.period()));
}

TEST_CASE("grid wavenumbers follow FFT order") {
  const Grid g(10.0, 1024);
  CHECK(g.wavenumber(1) == doctest::Approx(pi / 10.0));
  // the Nyquist mode is reported with negative sign; the symbols are even
  CHECK(std::abs(g.wavenumber(512)) == doctest::Approx(512 * pi / 10.0));
  CHECK(g.wavenumber(1023) == doctest::Approx(-pi / 10.0));
}

TEST_CASE("grid rejects bad sizes") {
  CHECK_THROWS_AS(Grid(5.0, 7), Error);
  CHECK_THROWS_AS(Grid(-1.0, 64), Error);
  CHECK_THROWS_AS(Grid(1.0, 4), Error);
}

TEST_CASE("mirror maps x to -x") {
  const Grid g(3.0, 64);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double y = g.node(g.mirror(j));
    if (j == 0) {
      CHECK(y == doctest::Approx(-3.0));
    } else {
      CHECK(y == doctest::Approx(-x));
    }
  }
}

TEST_CASE("l2 norm and inner product") {
  const Grid g(1.0, 256);
  CHECK(l2_norm(Profile::from_function(g, [](double) { return 1.0; })) == doctest::Approx(std::sqrt(2.0)));
  CHECK(l2_norm(Profile(g)) == 0.0);
  const Profile c = Profile::from_function(g, [](double x) { return std::cos(pi * x); });
  CHECK(std::abs(l2_norm(c) - 1.0) < 1e-12);
  const Profile one = Profile::from_function(g, [](double) { return 1.0; });
  CHECK(std::abs(inner(one, c)) < 1e-12);

  std::mt19937_64 rng(7);
  const Profile v = random_profile(g, rng);
  const Profile w = random_profile(g, rng);
  CHECK(inner(v, w) == doctest::Approx(inner(w, v)).epsilon(1e-14));
  CHECK(inner(w, w) == doctest::Approx(l2_norm(w) * l2_norm(w)).epsilon(1e-14));
}

TEST_CASE("profile arithmetic needs matching grids") {
  const Profile a(Grid(1.0, 16));
  const Profile b(Grid(2.0, 16));
  CHECK_THROWS_AS((void)(a + b), Error);
  try {
    (void)inner(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("sinc symbol values") {
  CHECK(symbol_A(1.7, 0.0) == 1.7);
  CHECK(std::abs(symbol_A(1.0, 2.0 * pi)) < 1e-15);
  CHECK(symbol_A(2.0, pi / 2.0) == doctest::Approx(4.0 / pi).epsilon(1e-15));
  CHECK(sinc(1e-9) == doctest::Approx(1.0));
  CHECK(sinch(1.0) == doctest::Approx(std::sinh(1.0)));
}

TEST_CASE("averaging operator on constants and modes") {
  const Grid g(2.0, 128);
  const Profile c = Profile::from_function(g, [](double) { return 0.7; });
  for (double xi : {0.3, 1.0, 2.5}) {
    const Profile a = conv_spectral(c, xi);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(0.7 * xi).epsilon(1e-14));
  }
  const double L = 2.0;
  const Profile m = Profile::from_function(g, [&](double x) { return std::cos(pi * x / L); });
  for (double xi : {0.5, 1.0, 1.5}) {
    const Profile a = conv_spectral(m, xi);
    const double s = xi * sinc(pi * xi / (2.0 * L));
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - s * m[j]) < 1e-8);
  }
  // k xi / 2 = pi is annihilated
  const Profile z = Profile::from_function(g, [](double x) { return std::cos(2.0 * pi * x); });
  CHECK(l2_norm(conv_spectral(z, 1.0)) < 1e-12);
}

TEST_CASE("averaging an indicator matches the test profile value") {
  const double L = 4.0, K = 0.8, lam = 1.0, xi = 1.0;
  const Grid g(L, 1024);
  const Profile w = Profile::from_function(g, [&](double x) { return std::abs(x) <= lam ? std::sqrt(K / lam) : 0.0; });
  const Profile a = conv_direct(w, xi);
  CHECK(a[g.center()] == doctest::Approx(xi * std::sqrt(K / lam)).epsilon(1e-12));
}

TEST_CASE("spectral and direct convolution agree to second order") {
  const double L = 5.0;
  double prev = 0.0;
  for (std::size_t N : {128u, 256u, 512u}) {
    const Grid g(L, N);
    const Profile w = Profile::from_function(g, [](double x) { return std::exp(-x * x) * (1.0 + 0.3 * std::sin(x)); });
    double err = 0.0;
    for (double xi : {0.45, 1.0, 1.7}) {
      err = std::max(err, l2_norm(conv_spectral(w, xi) - conv_direct(w, xi)) / l2_norm(w));
    }
    CHECK(err < 5.0 * g.spacing() * g.spacing());
    if (prev > 0.0) CHECK(err < 0.4 * prev);
    prev = err;
  }
}

TEST_CASE("cone check") {
  const Grid g(8.0, 512);
  const Profile s = Profile::from_function(g, [](double x) { return 1.0 / std::pow(std::cosh(x), 2); });
  const ConeReport r = cone_check(s, 0.0);
  CHECK(r.max_defect() < 1e-12);
  CHECK(r.in_cone());

  const Profile odd = Profile::from_function(g, [](double x) { return std::sin(pi * x / 8.0); });
  CHECK(cone_check(odd, 1e-8).evenness_defect > 0.0);

  const Profile gauss = Profile::from_function(g, [](double x) { return std::exp(-x * x); });
  const double n = l2_norm(gauss);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    if (x != 0.0) CHECK(gauss[j] <= n / std::sqrt(2.0 * std::abs(x)));
  }
  CHECK(cone_check(gauss, 1e-12).decay_defect <= 0.0);
}

TEST_CASE("localization ratio and support width") {
  const Grid g(5.0, 256);
  const Profile c = Profile::from_function(g, [](double) { return 2.0; });
  CHECK(localization_ratio(c) == doctest::Approx(1.0));
  const Profile bump = Profile::from_function(g, [](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; });
  CHECK(localization_ratio(bump) == doctest::Approx(5.0).epsilon(0.02));
  CHECK(support_width(bump, 0.01) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("direct convolution stays an exact average for random data") {
  std::mt19937_64 rng(11);
  const Grid g(3.0, 96);
  const Profile w = random_profile(g, rng);
  // the mean of A_xi W over the period is xi times the mean of W
  for (double xi : {0.5, 1.25}) {
    CHECK(conv_direct(w, xi).sum() == doctest::Approx(xi * w.sum()).epsilon(1e-10));
    CHECK(conv_spectral(w, xi).sum() == doctest::Approx(xi * w.sum()).epsilon(1e-10));
  }
}
