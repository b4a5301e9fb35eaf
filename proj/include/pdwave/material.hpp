#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pdwave {

using ParamList = std::vector<std::pair<std::string, double>>;

enum class PotentialFamily {
  Harmonic,    // c r^2
  Poly26,      // c2 r^2 + c6 r^6
  PiecewiseLinearStress,  // r^2/2 up to r = 1, then r - 1/2 + 5/2 (r-1)^2
  Hertz,       // max(r, 0)^p
  Cosh,        // cosh(beta r) - 1
  Silling,     // c2 r^2 + c3 r^3 for r <= 0, c2 r^2 for r > 0
  PolySeries,  // sum_i a_i r^(i+2), a_i >= 0
};

/// Micro-potential Phi with exact derivatives.
///
/// Normalized so that Phi(0) = Phi'(0) = 0. A reflected potential evaluates
/// Phi(-r); it is how compressive (nonpositive) waves are computed in the
/// positive cone.
class Potential {
 public:
  static Potential harmonic(double c);
  static Potential poly26(double c2, double c6);
  static Potential pwlin();
  static Potential hertz(double p);
  static Potential cosh(double beta);
  static Potential silling(double c2, double c3);
  static Potential polyseries(std::vector<double> coefficients);

  /// Library lookup by documented name; throws on unknown names or bad
  /// parameters. Missing parameters take the defaults of the example media.
  static Potential from_name(const std::string& name, const ParamList& params);

  Potential reflected() const;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  /// One-sided values at r = 0+ (may be +-inf for Hertz exponents below 2, 3).
  double curvature_at_zero() const;
  double third_at_zero() const;
  /// Largest |r| at which evaluation stays finite (700/beta for cosh).
  double max_argument() const;

  PotentialFamily family() const noexcept { return family_; }
  const std::string& name() const noexcept { return name_; }
  const ParamList& params() const noexcept { return params_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  bool is_reflected() const noexcept { return reflected_; }

 private:
  Potential(PotentialFamily family, std::string name, ParamList params);

  double raw_value(double r) const;
  double raw_d1(double r) const;
  double raw_d2(double r) const;
  double raw_d2_at_zero(int side) const;
  double raw_d3_at_zero(int side) const;
  double param(const std::string& key) const;

  PotentialFamily family_;
  std::string name_;
  ParamList params_;
  std::vector<double> coeffs_;
  double a_ = 0.0;  // first family parameter, cached
  double b_ = 0.0;  // second family parameter, cached
  bool reflected_ = false;
};

struct Bond {
  double xi;
  Potential phi;
};

/// Finite bond list with strictly increasing bond lengths.
struct DiscreteCoupling {
  std::vector<Bond> bonds;
};

DiscreteCoupling make_discrete(std::vector<Bond> bonds);

/// Named coefficient function alpha(xi) or beta(xi).
struct CoefficientFunction {
  std::string name;
  ParamList params;
  std::function<double(double)> eval;

  static CoefficientFunction constant(double value);
  static CoefficientFunction power(double scale, double exponent);
  static CoefficientFunction exponential(double scale, double length);
  static CoefficientFunction gaussian(double scale, double length);
  static CoefficientFunction from_name(const std::string& name,
                                       const ParamList& params);
};

/// Psi(r, xi) = alpha(xi) Phi(beta(xi) r), integrated over xi by a midpoint rule.
struct ContinuousCoupling {
  CoefficientFunction alpha;
  CoefficientFunction beta;
  Potential phi;
  double xi_max = 0.0;
  double xi_step = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> alpha_values;
  std::vector<double> beta_values;
};

/// Midpoint nodes (i - 1/2) * xi_step, weights xi_step, i = 1..xi_max/xi_step.
ContinuousCoupling build_quadrature(CoefficientFunction alpha,
                                    CoefficientFunction beta, Potential phi,
                                    double xi_max, double xi_step);

/// alpha(xi) = xi, beta(xi) = 1/xi on (0, H] with the piecewise Silling potential.
ContinuousCoupling silling_medium(double horizon, double c2, double c3,
                                  double xi_step);

/// Sum of w (xi + xi^2) alpha beta^2 phi(sqrt(xi) beta sqrt(2K)) with
/// phi(r) = |Phi'(r)| / r; finite for admissible media.
double integrability_diagnostic(const ContinuousCoupling& c, double K);

/// One quadrature or bond term of the energy:
/// weight * Phi(scale * A_xi W), integrated over x.
struct BondTerm {
  double xi;
  double weight;
  double scale;
  Potential phi;
};

class Coupling {
 public:
  Coupling(DiscreteCoupling d);
  Coupling(ContinuousCoupling c);

  bool is_discrete() const noexcept {
    return std::holds_alternative<DiscreteCoupling>(data_);
  }
  const DiscreteCoupling& discrete() const;
  const ContinuousCoupling& continuous() const;

  const std::vector<BondTerm>& terms() const noexcept { return terms_; }
  double max_bond_length() const;

  /// All potentials replaced by Phi(-r).
  Coupling reflected() const;

 private:
  void build_terms();

  std::variant<DiscreteCoupling, ContinuousCoupling> data_;
  std::vector<BondTerm> terms_;
};

struct SuperquadraticReport {
  double normalization_defect = 0.0;  // max(|Phi(0)|, |Phi'(0)|)
  double convexity_violation = 0.0;   // max(0, Phi' - Phi'' r)
  double monotonicity_violation = 0.0;  // max(0, -Phi')
  double growth_violation = 0.0;      // max(0, 2 Phi - Phi' r)
  double worst_r = 0.0;

  double max_violation() const;
};

/// Samples r_i = r_max * i / samples, i = 1..samples.
SuperquadraticReport check_superquadratic(const Potential& phi, double r_max,
                                          std::size_t samples);

}  // namespace pdwave
