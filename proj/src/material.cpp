#include "pdwave/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdwave/error.hpp"

namespace pdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCoshLimit = 700.0;

double lookup(const ParamList& params, const std::string& key, double fallback) {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return fallback;
}

void reject_unknown(const ParamList& params,
                    std::initializer_list<const char*> allowed,
                    const std::string& family) {
  for (const auto& [k, v] : params) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return k == a; });
    if (!known) {
      fail(ErrorCode::Config,
           "unknown parameter '" + k + "' for potential " + family);
    }
  }
}

}  // namespace

Potential::Potential(PotentialFamily family, std::string name, ParamList params)
    : family_(family), name_(std::move(name)), params_(std::move(params)) {}

double Potential::param(const std::string& key) const {
  return lookup(params_, key, 0.0);
}

Potential Potential::harmonic(double c) {
  require(c > 0.0, "harmonic stiffness must be positive");
  Potential p(PotentialFamily::Harmonic, "harmonic", {{"c", c}});
  p.a_ = c;
  return p;
}

Potential Potential::poly26(double c2, double c6) {
  require(c2 >= 0.0 && c6 >= 0.0 && c2 + c6 > 0.0,
          "poly26 coefficients must be nonnegative and not both zero");
  Potential p(PotentialFamily::Poly26, "poly26", {{"c2", c2}, {"c6", c6}});
  p.a_ = c2;
  p.b_ = c6;
  return p;
}

Potential Potential::pwlin() {
  return Potential(PotentialFamily::PiecewiseLinearStress, "pwlin", {});
}

Potential Potential::hertz(double p) {
  require(p > 1.0, "hertz exponent must exceed 1, got " + std::to_string(p));
  Potential pot(PotentialFamily::Hertz, "hertz", {{"p", p}});
  pot.a_ = p;
  return pot;
}

Potential Potential::cosh(double beta) {
  require(beta > 0.0, "cosh rate must be positive");
  Potential p(PotentialFamily::Cosh, "cosh", {{"beta", beta}});
  p.a_ = beta;
  return p;
}

Potential Potential::silling(double c2, double c3) {
  require(c2 > 0.0, "silling quadratic coefficient must be positive");
  Potential p(PotentialFamily::Silling, "silling", {{"c2", c2}, {"c3", c3}});
  p.a_ = c2;
  p.b_ = c3;
  return p;
}

Potential Potential::polyseries(std::vector<double> coefficients) {
  require(!coefficients.empty(), "polyseries needs at least one coefficient");
  for (double c : coefficients) {
    require(c >= 0.0 && std::isfinite(c),
            "polyseries coefficients must be finite and nonnegative");
  }
  require(std::any_of(coefficients.begin(), coefficients.end(),
                      [](double c) { return c > 0.0; }),
          "polyseries must not vanish identically");
  Potential p(PotentialFamily::PolySeries, "polyseries", {});
  p.coeffs_ = std::move(coefficients);
  return p;
}

Potential Potential::from_name(const std::string& name, const ParamList& params) {
  if (name == "harmonic") {
    reject_unknown(params, {"c"}, name);
    return harmonic(lookup(params, "c", 0.5));
  }
  if (name == "poly26") {
    reject_unknown(params, {"c2", "c6"}, name);
    return poly26(lookup(params, "c2", 0.5), lookup(params, "c6", 1.0 / 6.0));
  }
  if (name == "pwlin") {
    reject_unknown(params, {}, name);
    return pwlin();
  }
  if (name == "hertz") {
    reject_unknown(params, {"p"}, name);
    return hertz(lookup(params, "p", 2.5));
  }
  if (name == "cosh") {
    reject_unknown(params, {"beta"}, name);
    return cosh(lookup(params, "beta", 1.0));
  }
  if (name == "silling") {
    reject_unknown(params, {"c2", "c3"}, name);
    return silling(lookup(params, "c2", 0.5), lookup(params, "c3", -1.0 / 6.0));
  }
  if (name == "polyseries") {
    // Parameters a2, a3, ... multiply r^2, r^3, ...
    std::vector<double> coeffs;
    std::size_t highest = 0;
    for (const auto& [k, v] : params) {
      if (k.size() < 2 || k.size() > 3 || k[0] != 'a' ||
          k.find_first_not_of("0123456789", 1) != std::string::npos) {
        fail(ErrorCode::Config, "polyseries parameters are named a2, a3, ...");
      }
      const auto power = static_cast<std::size_t>(std::stoul(k.substr(1)));
      if (power < 2) fail(ErrorCode::Config, "polyseries powers start at 2");
      highest = std::max(highest, power);
    }
    if (highest == 0) fail(ErrorCode::Config, "polyseries needs coefficients");
    coeffs.assign(highest - 1, 0.0);
    for (const auto& [k, v] : params) {
      coeffs[std::stoul(k.substr(1)) - 2] = v;
    }
    return polyseries(std::move(coeffs));
  }
  fail(ErrorCode::Config, "unknown potential '" + name + "'");
}

Potential Potential::reflected() const {
  Potential p = *this;
  p.reflected_ = !reflected_;
  return p;
}

double Potential::raw_value(double r) const {
  switch (family_) {
    case PotentialFamily::Harmonic:
      return a_ * r * r;
    case PotentialFamily::Poly26: {
      const double r2 = r * r;
      return a_ * r2 + b_ * r2 * r2 * r2;
    }
    case PotentialFamily::PiecewiseLinearStress:
      if (r <= 1.0) return 0.5 * r * r;
      return r - 0.5 + 2.5 * (r - 1.0) * (r - 1.0);
    case PotentialFamily::Hertz:
      return r > 0.0 ? std::pow(r, a_) : 0.0;
    case PotentialFamily::Cosh: {
      const double y = a_ * r;
      // cosh(y) - 1 without cancellation
      const double s = std::sinh(0.5 * y);
      return 2.0 * s * s;
    }
    case PotentialFamily::Silling:
      return r <= 0.0 ? a_ * r * r + b_ * r * r * r : a_ * r * r;
    case PotentialFamily::PolySeries: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * r + coeffs_[i];
      return acc * r * r;
    }
  }
  return 0.0;
}

double Potential::raw_d1(double r) const {
  switch (family_) {
    case PotentialFamily::Harmonic:
      return 2.0 * a_ * r;
    case PotentialFamily::Poly26: {
      const double r2 = r * r;
      return 2.0 * a_ * r + 6.0 * b_ * r2 * r2 * r;
    }
    case PotentialFamily::PiecewiseLinearStress:
      return r <= 1.0 ? r : 1.0 + 5.0 * (r - 1.0);
    case PotentialFamily::Hertz:
      return r > 0.0 ? a_ * std::pow(r, a_ - 1.0) : 0.0;
    case PotentialFamily::Cosh:
      return a_ * std::sinh(a_ * r);
    case PotentialFamily::Silling:
      return r <= 0.0 ? 2.0 * a_ * r + 3.0 * b_ * r * r : 2.0 * a_ * r;
    case PotentialFamily::PolySeries: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) {
        acc = acc * r + static_cast<double>(i + 2) * coeffs_[i];
      }
      return acc * r;
    }
  }
  return 0.0;
}

double Potential::raw_d2(double r) const {
  switch (family_) {
    case PotentialFamily::Harmonic:
      return 2.0 * a_;
    case PotentialFamily::Poly26: {
      const double r2 = r * r;
      return 2.0 * a_ + 30.0 * b_ * r2 * r2;
    }
    case PotentialFamily::PiecewiseLinearStress:
      return r <= 1.0 ? 1.0 : 5.0;
    case PotentialFamily::Hertz:
      if (r > 0.0) return a_ * (a_ - 1.0) * std::pow(r, a_ - 2.0);
      return r < 0.0 ? 0.0 : raw_d2_at_zero(+1);
    case PotentialFamily::Cosh:
      return a_ * a_ * std::cosh(a_ * r);
    case PotentialFamily::Silling:
      return r <= 0.0 ? 2.0 * a_ + 6.0 * b_ * r : 2.0 * a_;
    case PotentialFamily::PolySeries: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const auto n = static_cast<double>(i + 2);
        acc = acc * r + n * (n - 1.0) * coeffs_[i];
      }
      return acc;
    }
  }
  return 0.0;
}

double Potential::raw_d2_at_zero(int side) const {
  if (family_ == PotentialFamily::Hertz) {
    if (side < 0) return 0.0;
    if (a_ == 2.0) return 2.0;
    return a_ > 2.0 ? 0.0 : kInf;
  }
  return raw_d2(0.0);
}

double Potential::raw_d3_at_zero(int side) const {
  switch (family_) {
    case PotentialFamily::Harmonic:
    case PotentialFamily::Poly26:
    case PotentialFamily::PiecewiseLinearStress:
    case PotentialFamily::Cosh:
      return 0.0;
    case PotentialFamily::Hertz:
      if (side < 0 || a_ == 2.0 || a_ > 3.0) return 0.0;
      if (a_ == 3.0) return 6.0;
      return a_ > 2.0 ? kInf : -kInf;
    case PotentialFamily::Silling:
      return side < 0 ? 6.0 * b_ : 0.0;
    case PotentialFamily::PolySeries:
      return coeffs_.size() > 1 ? 6.0 * coeffs_[1] : 0.0;
  }
  return 0.0;
}

double Potential::value(double r) const {
  return reflected_ ? raw_value(-r) : raw_value(r);
}

double Potential::d1(double r) const {
  return reflected_ ? -raw_d1(-r) : raw_d1(r);
}

double Potential::d2(double r) const {
  return reflected_ ? raw_d2(-r) : raw_d2(r);
}

double Potential::curvature_at_zero() const {
  return raw_d2_at_zero(reflected_ ? -1 : +1);
}

double Potential::third_at_zero() const {
  return reflected_ ? -raw_d3_at_zero(-1) : raw_d3_at_zero(+1);
}

double Potential::max_argument() const {
  if (family_ == PotentialFamily::Cosh) return kCoshLimit / a_;
  return kInf;
}

DiscreteCoupling make_discrete(std::vector<Bond> bonds) {
  require(!bonds.empty(), "a discrete coupling needs at least one bond");
  for (std::size_t m = 0; m < bonds.size(); ++m) {
    require(bonds[m].xi > 0.0 && std::isfinite(bonds[m].xi),
            "bond lengths must be positive");
    if (m > 0) {
      require(bonds[m].xi > bonds[m - 1].xi,
              "bond lengths must be strictly increasing");
    }
  }
  return DiscreteCoupling{std::move(bonds)};
}

CoefficientFunction CoefficientFunction::constant(double value) {
  return {"constant", {{"value", value}}, [value](double) { return value; }};
}

CoefficientFunction CoefficientFunction::power(double scale, double exponent) {
  return {"power",
          {{"scale", scale}, {"exponent", exponent}},
          [scale, exponent](double xi) { return scale * std::pow(xi, exponent); }};
}

CoefficientFunction CoefficientFunction::exponential(double scale, double length) {
  require(length > 0.0, "exponential length must be positive");
  return {"exponential",
          {{"scale", scale}, {"length", length}},
          [scale, length](double xi) { return scale * std::exp(-xi / length); }};
}

CoefficientFunction CoefficientFunction::gaussian(double scale, double length) {
  require(length > 0.0, "gaussian length must be positive");
  return {"gaussian",
          {{"scale", scale}, {"length", length}},
          [scale, length](double xi) {
            const double s = xi / length;
            return scale * std::exp(-s * s);
          }};
}

CoefficientFunction CoefficientFunction::from_name(const std::string& name,
                                                   const ParamList& params) {
  if (name == "constant") {
    reject_unknown(params, {"value"}, name);
    return constant(lookup(params, "value", 1.0));
  }
  if (name == "power") {
    reject_unknown(params, {"scale", "exponent"}, name);
    return power(lookup(params, "scale", 1.0), lookup(params, "exponent", 0.0));
  }
  if (name == "exponential") {
    reject_unknown(params, {"scale", "length"}, name);
    return exponential(lookup(params, "scale", 1.0), lookup(params, "length", 1.0));
  }
  if (name == "gaussian") {
    reject_unknown(params, {"scale", "length"}, name);
    return gaussian(lookup(params, "scale", 1.0), lookup(params, "length", 1.0));
  }
  fail(ErrorCode::Config, "unknown coefficient function '" + name + "'");
}

ContinuousCoupling build_quadrature(CoefficientFunction alpha,
                                    CoefficientFunction beta, Potential phi,
                                    double xi_max, double xi_step) {
  require(xi_step > 0.0 && xi_max > xi_step,
          "quadrature needs xi_max > xi_step > 0");
  ContinuousCoupling c{std::move(alpha), std::move(beta), std::move(phi),
                       xi_max, xi_step, {}, {}, {}, {}};
  const auto count =
      static_cast<std::size_t>(std::floor(xi_max / xi_step + 1e-9));
  for (std::size_t i = 1; i <= count; ++i) {
    const double xi = (static_cast<double>(i) - 0.5) * xi_step;
    const double a = c.alpha.eval(xi);
    const double b = c.beta.eval(xi);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      fail(ErrorCode::InvalidArgument,
           "coefficient functions are not finite at xi = " + std::to_string(xi));
    }
    require(a >= 0.0 && b >= 0.0, "coefficient functions must be nonnegative");
    c.nodes.push_back(xi);
    c.weights.push_back(xi_step);
    c.alpha_values.push_back(a);
    c.beta_values.push_back(b);
  }
  return c;
}

ContinuousCoupling silling_medium(double horizon, double c2, double c3,
                                  double xi_step) {
  require(horizon > 0.0, "horizon must be positive");
  return build_quadrature(CoefficientFunction::power(1.0, 1.0),
                          CoefficientFunction::power(1.0, -1.0),
                          Potential::silling(c2, c3), horizon, xi_step);
}

double integrability_diagnostic(const ContinuousCoupling& c, double K) {
  require(K > 0.0, "constraint value must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const double xi = c.nodes[i];
    const double a = c.alpha_values[i];
    const double b = c.beta_values[i];
    const double r = std::sqrt(xi) * b * std::sqrt(2.0 * K);
    const double phi =
        r > 0.0 ? std::abs(c.phi.d1(r)) / r : c.phi.curvature_at_zero();
    sum += c.weights[i] * (xi + xi * xi) * a * b * b * phi;
  }
  return sum;
}

Coupling::Coupling(DiscreteCoupling d) : data_(std::move(d)) { build_terms(); }
Coupling::Coupling(ContinuousCoupling c) : data_(std::move(c)) { build_terms(); }

const DiscreteCoupling& Coupling::discrete() const {
  require(is_discrete(), "coupling is not discrete");
  return std::get<DiscreteCoupling>(data_);
}

const ContinuousCoupling& Coupling::continuous() const {
  require(!is_discrete(), "coupling is not continuous");
  return std::get<ContinuousCoupling>(data_);
}

void Coupling::build_terms() {
  terms_.clear();
  if (const auto* d = std::get_if<DiscreteCoupling>(&data_)) {
    for (const auto& b : d->bonds) terms_.push_back({b.xi, 1.0, 1.0, b.phi});
  } else {
    const auto& c = std::get<ContinuousCoupling>(data_);
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      terms_.push_back({c.nodes[i], c.weights[i] * c.alpha_values[i],
                        c.beta_values[i], c.phi});
    }
  }
}

double Coupling::max_bond_length() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, t.xi);
  return m;
}

Coupling Coupling::reflected() const {
  if (const auto* d = std::get_if<DiscreteCoupling>(&data_)) {
    DiscreteCoupling r = *d;
    for (auto& b : r.bonds) b.phi = b.phi.reflected();
    return Coupling(std::move(r));
  }
  ContinuousCoupling r = std::get<ContinuousCoupling>(data_);
  r.phi = r.phi.reflected();
  return Coupling(std::move(r));
}

double SuperquadraticReport::max_violation() const {
  return std::max({normalization_defect, convexity_violation,
                   monotonicity_violation, growth_violation});
}

SuperquadraticReport check_superquadratic(const Potential& phi, double r_max,
                                          std::size_t samples) {
  require(r_max > 0.0, "r_max must be positive");
  require(samples > 0, "need at least one sample");
  SuperquadraticReport rep;
  rep.normalization_defect = std::max(std::abs(phi.value(0.0)), std::abs(phi.d1(0.0)));
  double worst = -1.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = r_max * static_cast<double>(i) / static_cast<double>(samples);
    const double p = phi.value(r);
    const double p1 = phi.d1(r);
    const double p2 = phi.d2(r);
    const double convexity = std::max(0.0, p1 - p2 * r);
    const double monotone = std::max(0.0, -p1);
    const double growth = std::max(0.0, 2.0 * p - p1 * r);
    rep.convexity_violation = std::max(rep.convexity_violation, convexity);
    rep.monotonicity_violation = std::max(rep.monotonicity_violation, monotone);
    rep.growth_violation = std::max(rep.growth_violation, growth);
    const double local = std::max({convexity, monotone, growth});
    if (local > worst) {
      worst = local;
      rep.worst_r = r;
    }
  }
  return rep;
}

}  // namespace pdwave
