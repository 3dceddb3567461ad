#include "kzk/nonlinearity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kzk {

namespace {

double sigma(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double sigma_prime(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

double eta_prime(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = sigma(x), b = sigma(1.0 - x);
  return (sigma_prime(x) * b + a * sigma_prime(1.0 - x)) / ((a + b) * (a + b));
}

double integrate(auto&& f, double u) {
  if (u == 0.0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, u, 15, 1e-12);
}

} // namespace

double eta(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = sigma(x);
  return a / (a + sigma(1.0 - x));
}

Nonlinearity Nonlinearity::none() { return {Kind::None, 0.0, 0.0, 1.0, 0.0}; }

Nonlinearity Nonlinearity::quadratic(double h) {
  if (h < 0.0) throw std::invalid_argument("regularization h must be >= 0");
  return {Kind::Quadratic, 1.0, 1.0, 1.0, h};
}

Nonlinearity Nonlinearity::cubic(double a, double h) {
  if (h < 0.0) throw std::invalid_argument("regularization h must be >= 0");
  return {Kind::Cubic, a, 2.0, 1.0, h};
}

Nonlinearity Nonlinearity::power_law(double p, double sign, double h) {
  if (h < 0.0) throw std::invalid_argument("regularization h must be >= 0");
  if (p < 0.0) throw std::invalid_argument("power-law exponent must be >= 0");
  if (sign != 1.0 && sign != -1.0) throw std::invalid_argument("power-law sign must be +1 or -1");
  return {Kind::PowerLaw, 1.0, p, sign, h};
}

std::string Nonlinearity::name() const {
  std::ostringstream os;
  switch (kind_) {
  case Kind::None: os << "none"; break;
  case Kind::Quadratic: os << "quadratic"; break;
  case Kind::Cubic: os << "cubic(a=" << a_ << ')'; break;
  case Kind::PowerLaw: os << "power(p=" << p_ << ",sign=" << sign_ << ')'; break;
  }
  if (h_ > 0.0) os << "[h=" << h_ << ']';
  return os.str();
}

double Nonlinearity::p() const { return kind_ == Kind::None ? 0.0 : p_; }

double Nonlinearity::q() const {
  switch (kind_) {
  case Kind::None:
  case Kind::Quadratic: return 0.0;
  case Kind::Cubic: return 1.0;
  case Kind::PowerLaw: return std::max(0.0, p_ - 1.0);
  }
  return 0.0;
}

double Nonlinearity::dealias_fraction() const {
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return 1.0 / 3.0;
  default: return 0.5;
  }
}

double Nonlinearity::raw_gprime(double u) const {
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return u;
  case Kind::Cubic: return a_ * u * u;
  case Kind::PowerLaw: return sign_ * std::pow(std::abs(u), p_);
  }
  return 0.0;
}

double Nonlinearity::raw_gsecond(double u) const {
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return 1.0;
  case Kind::Cubic: return 2.0 * a_ * u;
  case Kind::PowerLaw:
    if (u == 0.0) return p_ == 1.0 ? sign_ : 0.0;
    return sign_ * p_ * std::copysign(std::pow(std::abs(u), p_ - 1.0), u);
  }
  return 0.0;
}

double Nonlinearity::cutoff(double u) const { return h_ > 0.0 ? eta(2.0 - h_ * std::abs(u)) : 1.0; }

double Nonlinearity::gprime(double u) const { return raw_gprime(u) * cutoff(u); }

double Nonlinearity::gsecond(double u) const {
  if (h_ <= 0.0) return raw_gsecond(u);
  const double z = 2.0 - h_ * std::abs(u);
  const double dz = u == 0.0 ? 0.0 : -h_ * std::copysign(1.0, u);
  return raw_gsecond(u) * eta(z) + raw_gprime(u) * eta_prime(z) * dz;
}

double Nonlinearity::g(double u) const {
  if (h_ > 0.0) return integrate([this](double s) { return gprime(s); }, u);
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return 0.5 * u * u;
  case Kind::Cubic: return a_ * u * u * u / 3.0;
  case Kind::PowerLaw: return sign_ * std::copysign(std::pow(std::abs(u), p_ + 1.0), u) / (p_ + 1.0);
  }
  return 0.0;
}

double Nonlinearity::gstar(double u) const {
  if (h_ > 0.0) return integrate([this](double s) { return g(s); }, u);
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return u * u * u / 6.0;
  case Kind::Cubic: return a_ * u * u * u * u / 12.0;
  case Kind::PowerLaw:
    return sign_ * std::pow(std::abs(u), p_ + 2.0) / ((p_ + 1.0) * (p_ + 2.0));
  }
  return 0.0;
}

double Nonlinearity::gprime_u_star(double u) const {
  if (h_ > 0.0) return integrate([this](double s) { return gprime(s) * s; }, u);
  switch (kind_) {
  case Kind::None: return 0.0;
  case Kind::Quadratic: return u * u * u / 3.0;
  case Kind::Cubic: return a_ * u * u * u * u / 4.0;
  case Kind::PowerLaw: return sign_ * std::pow(std::abs(u), p_ + 2.0) / (p_ + 2.0);
  }
  return 0.0;
}

} // namespace kzk
