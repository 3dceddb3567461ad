#include "kzk/eigenbasis.hpp"

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kzk {

using std::numbers::pi;

BCFamily parse_family(const std::string& tag) {
  if (tag == "a" || tag == "A") return BCFamily::A_DirichletDirichlet;
  if (tag == "b" || tag == "B") return BCFamily::B_NeumannNeumann;
  if (tag == "c" || tag == "C") return BCFamily::C_DirichletNeumann;
  if (tag == "d" || tag == "D") return BCFamily::D_Periodic;
  throw std::invalid_argument("unknown boundary family '" + tag + "'");
}

std::string family_tag(BCFamily f) {
  switch (f) {
  case BCFamily::A_DirichletDirichlet: return "a";
  case BCFamily::B_NeumannNeumann: return "b";
  case BCFamily::C_DirichletNeumann: return "c";
  case BCFamily::D_Periodic: return "d";
  }
  return "?";
}

double steklov_kappa(BCFamily f) {
  if (f == BCFamily::A_DirichletDirichlet) return 1.0;
  if (f == BCFamily::C_DirichletNeumann) return 4.0;
  throw std::invalid_argument("Steklov constant is defined for families a and c only");
}

EigenBasis::EigenBasis(BCFamily family, double L, int count) : family_(family), L_(L) {
  if (!(L > 0.0)) throw std::invalid_argument("strip width L must be positive");
  if (count < 1) throw std::invalid_argument("mode count must be at least 1");

  int n_modes = count;
  int n_y = count;
  switch (family) {
  case BCFamily::A_DirichletDirichlet:
    nodes_ = Eigen::VectorXd::LinSpaced(n_y, 1, n_y) * (L / (n_y + 1));
    weights_ = Eigen::VectorXd::Constant(n_y, L / (n_y + 1));
    break;
  case BCFamily::B_NeumannNeumann:
    n_y = count + 1;
    nodes_ = Eigen::VectorXd::LinSpaced(n_y, 0, count) * (L / count);
    weights_ = Eigen::VectorXd::Constant(n_y, L / count);
    weights_(0) *= 0.5;
    weights_(n_y - 1) *= 0.5;
    break;
  case BCFamily::C_DirichletNeumann:
    nodes_ = Eigen::VectorXd::LinSpaced(n_y, 1, n_y) * (L / n_y);
    weights_ = Eigen::VectorXd::Constant(n_y, L / n_y);
    weights_(n_y - 1) *= 0.5;
    break;
  case BCFamily::D_Periodic:
    if (count < 2) throw std::invalid_argument("family d needs a mode count of at least 2");
    n_modes = 2 * (count / 2) + 1;
    n_y = n_modes;
    nodes_ = Eigen::VectorXd::LinSpaced(n_y, 0, n_y - 1) * (L / n_y);
    weights_ = Eigen::VectorXd::Constant(n_y, L / n_y);
    break;
  }

  lambda_.resize(n_modes);
  for (int l = 0; l < n_modes; ++l) {
    const int k = index(l);
    switch (family) {
    case BCFamily::A_DirichletDirichlet:
    case BCFamily::B_NeumannNeumann:
      lambda_(l) = std::pow(pi * k / L, 2);
      break;
    case BCFamily::C_DirichletNeumann:
      lambda_(l) = std::pow((k - 0.5) * pi / L, 2);
      break;
    case BCFamily::D_Periodic:
      lambda_(l) = std::pow(2.0 * pi * ((l + 1) / 2) / L, 2);
      break;
    }
  }

  psi_.resize(n_y, n_modes);
  dpsi_.resize(n_y, n_modes);
  for (int j = 0; j < n_y; ++j)
    for (int l = 0; l < n_modes; ++l) {
      psi_(j, l) = eval(l, nodes_(j), 0);
      dpsi_(j, l) = eval(l, nodes_(j), 1);
    }
  fwd_ = psi_.transpose() * weights_.asDiagonal();
}

int EigenBasis::index(int l) const {
  switch (family_) {
  case BCFamily::A_DirichletDirichlet:
  case BCFamily::C_DirichletNeumann:
    return l + 1;
  default:
    return l;
  }
}

double EigenBasis::eval(int l, double y, int k) const {
  if (l < 0 || l >= count()) throw std::out_of_range("mode index out of range");
  const double amp = std::sqrt(2.0 / L_);
  double w = 0.0;
  bool cosine = false;
  switch (family_) {
  case BCFamily::A_DirichletDirichlet:
    w = pi * index(l) / L_;
    break;
  case BCFamily::B_NeumannNeumann:
    if (l == 0) return k == 0 ? 1.0 / std::sqrt(L_) : 0.0;
    w = pi * l / L_;
    cosine = true;
    break;
  case BCFamily::C_DirichletNeumann:
    w = (index(l) - 0.5) * pi / L_;
    break;
  case BCFamily::D_Periodic:
    if (l == 0) return k == 0 ? 1.0 / std::sqrt(L_) : 0.0;
    w = 2.0 * pi * ((l + 1) / 2) / L_;
    cosine = (l % 2 == 1);
    break;
  }
  const double s = std::sin(w * y);
  const double c = std::cos(w * y);
  if (cosine) {
    switch (k) {
    case 0: return amp * c;
    case 1: return -amp * w * s;
    case 2: return -amp * w * w * c;
    }
  } else {
    switch (k) {
    case 0: return amp * s;
    case 1: return amp * w * c;
    case 2: return -amp * w * w * s;
    }
  }
  throw std::invalid_argument("eigenfunction derivative order must be 0, 1 or 2");
}

Eigen::VectorXd EigenBasis::forward(const Eigen::VectorXd& samples) const {
  if (samples.size() != n_nodes())
    throw std::invalid_argument("sample length does not match the y-grid");
  return fwd_ * samples;
}

Eigen::VectorXd EigenBasis::inverse(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() > count()) throw std::invalid_argument("too many coefficients for the basis");
  return psi_.leftCols(coeffs.size()) * coeffs;
}

EigenBasis build_basis(BCFamily family, double L, int count) { return {family, L, count}; }

SteklovReport steklov_check(BCFamily family, double L, const std::function<double(double)>& f,
                            double bc_tol) {
  namespace bq = boost::math::quadrature;
  namespace bd = boost::math::differentiation;
  SteklovReport rep;
  rep.kappa = steklov_kappa(family);
  if (!(L > 0.0)) throw std::invalid_argument("strip width L must be positive");

  double fmax = 0.0;
  for (int i = 0; i <= 256; ++i) fmax = std::max(fmax, std::abs(f(L * i / 256.0)));
  const double tol = bc_tol * std::max(fmax, 1e-300);
  if (std::abs(f(0.0)) > tol) throw std::domain_error("f(0) != 0");
  if (family == BCFamily::A_DirichletDirichlet && std::abs(f(L)) > tol)
    throw std::domain_error("f(L) != 0");

  auto f2 = [&](double y) { return f(y) * f(y); };
  auto df2 = [&](double y) {
    const double d = bd::finite_difference_derivative(f, y);
    return d * d;
  };
  const double num = bq::gauss_kronrod<double, 61>::integrate(f2, 0.0, L, 15, 1e-14);
  const double den = bq::gauss_kronrod<double, 61>::integrate(df2, 0.0, L, 15, 1e-14);
  rep.bound = rep.kappa * L * L / (pi * pi);
  rep.ratio = den > 0.0 ? num / den : 0.0;
  rep.pass = rep.ratio <= rep.bound * (1.0 + 1e-9);
  return rep;
}

} // namespace kzk
