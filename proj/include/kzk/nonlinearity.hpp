#pragma once

#include <string>

namespace kzk {

/// Smooth step: 0 for x <= 0, 1 for x >= 1, eta(x) + eta(1 - x) = 1.
double eta(double x);

/// g(u) with g(0) = 0, described through g'(u):
///   None       g' = 0
///   Quadratic  g' = u
///   Cubic      g' = a u^2
///   PowerLaw   g' = sign |u|^p
/// With h > 0 every evaluator uses the cut-off g_h'(u) = g'(u) eta(2 - h|u|);
/// g_h, g_h* and (g_h' u)* then come from adaptive quadrature.
class Nonlinearity {
public:
  enum class Kind { None, Quadratic, Cubic, PowerLaw };

  static Nonlinearity none();
  static Nonlinearity quadratic(double h = 0.0);
  static Nonlinearity cubic(double a, double h = 0.0);
  static Nonlinearity power_law(double p, double sign, double h = 0.0);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double sign() const { return sign_; }
  double h() const { return h_; }
  std::string name() const;

  /// Growth exponent p in |g'(u)| <= c|u|^p.
  double p() const;
  /// Growth exponent q in |g''(u)| <= c|u|^q.
  double q() const;
  /// Fraction of the highest y-modes zeroed when forming g'(u)u_x.
  double dealias_fraction() const;

  bool is_zero() const { return kind_ == Kind::None; }

  double gprime(double u) const;
  double gsecond(double u) const;
  double g(double u) const;
  /// g*(u) = int_0^u g
  double gstar(double u) const;
  /// (g'(u) u)* = int_0^u g'(s) s ds
  double gprime_u_star(double u) const;

private:
  Nonlinearity(Kind kind, double a, double p, double sign, double h)
      : kind_(kind), a_(a), p_(p), sign_(sign), h_(h) {}

  double raw_gprime(double u) const;
  double raw_gsecond(double u) const;
  double cutoff(double u) const;

  Kind kind_;
  double a_;
  double p_;
  double sign_;
  double h_;
};

} // namespace kzk
