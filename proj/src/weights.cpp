#include "kzk/weights.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kzk {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// n-th derivative of arctan for n >= 1:
// (-1)^{n-1} (n-1)! Im((z - i)^{-n}).
double arctan_derivative(double z, int n) {
  const std::complex<double> w = std::pow(std::complex<double>(z, -1.0), -n);
  const double sign = (n - 1) % 2 == 0 ? 1.0 : -1.0;
  return sign * factorial(n - 1) * w.imag();
}

} // namespace

WeightSpec WeightSpec::exponential(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential weight needs alpha > 0");
  return {WeightKind::Exponential, alpha, 0.0, 0};
}

WeightSpec WeightSpec::power(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("power weight needs alpha > 0");
  return {WeightKind::Power, alpha, 0.0, 0};
}

WeightSpec WeightSpec::rho0() { return {WeightKind::ArctanRho0, 0.0, 0.0, 0}; }

WeightSpec WeightSpec::rho0_shifted(double x0) {
  return {WeightKind::ArctanRho0Shifted, 0.0, x0, 0};
}

WeightSpec WeightSpec::unit() { return {WeightKind::Unit, 0.0, 0.0, 0}; }

WeightSpec WeightSpec::from_name(const std::string& name, double alpha, double x0) {
  if (name == "exp") return exponential(alpha);
  if (name == "pow") return power(alpha);
  if (name == "rho0") return x0 == 0.0 ? rho0() : rho0_shifted(x0);
  if (name == "unit") return unit();
  throw std::invalid_argument("unknown weight kind '" + name + "'");
}

std::string WeightSpec::label() const {
  std::ostringstream os;
  if (shift_ > 0) os << 'd' << shift_ << ':';
  switch (kind_) {
  case WeightKind::Exponential: os << "exp(" << alpha_ << ')'; break;
  case WeightKind::Power: os << "pow(" << alpha_ << ')'; break;
  case WeightKind::ArctanRho0: os << "rho0"; break;
  case WeightKind::ArctanRho0Shifted: os << "rho0(x-" << x0_ << ')'; break;
  case WeightKind::Unit: os << "unit"; break;
  }
  return os.str();
}

double WeightSpec::eval(double x, int order) const {
  if (x < 0.0) throw std::invalid_argument("weight evaluated at negative x");
  if (order < 0 || order > 5) throw std::invalid_argument("weight derivative order must be in 0..5");
  return eval_any(x, order);
}

double WeightSpec::eval_any(double x, int order) const {
  const int n = order + shift_;
  switch (kind_) {
  case WeightKind::Exponential: {
    const double k = 2.0 * alpha_;
    return std::pow(k, n) * std::exp(k * x);
  }
  case WeightKind::Power: {
    double coeff = 1.0;
    for (int k = 0; k < n; ++k) coeff *= 2.0 * alpha_ - k;
    return coeff * std::pow(1.0 + x, 2.0 * alpha_ - n);
  }
  case WeightKind::ArctanRho0:
  case WeightKind::ArctanRho0Shifted: {
    const double z = x - x0_;
    if (n == 0) return 1.0 + kTwoOverPi * std::atan(z);
    return kTwoOverPi * arctan_derivative(z, n);
  }
  case WeightKind::Unit:
    return n == 0 ? 1.0 : 0.0;
  }
  return 0.0;
}

WeightSpec derivative_weight(const WeightSpec& w) {
  switch (w.kind_) {
  case WeightKind::Unit:
    throw std::invalid_argument("the derivative of a constant weight is not a positive weight");
  case WeightKind::Power:
    if (2.0 * w.alpha_ - w.shift_ - 1.0 <= 0.0)
      throw std::invalid_argument("power weight derivative needs 2*alpha - 1 > 0");
    break;
  case WeightKind::ArctanRho0:
  case WeightKind::ArctanRho0Shifted:
    if (w.shift_ >= 1)
      throw std::invalid_argument("second derivative of rho0 changes sign");
    break;
  case WeightKind::Exponential:
    break;
  }
  return WeightSpec(w.kind_, w.alpha_, w.x0_, w.shift_ + 1);
}

AdmissibilityReport check_admissibility(const WeightSpec& w, double x_max, int n_samples,
                                        double cap) {
  if (!(x_max > 1.0)) throw std::invalid_argument("check_admissibility needs x_max > 1");
  if (n_samples < 100) throw std::invalid_argument("check_admissibility needs n_samples >= 100");

  AdmissibilityReport rep;
  const double step = x_max / (n_samples - 1);
  std::vector<double> psi(n_samples);
  bool positive = true;
  for (int i = 0; i < n_samples; ++i) {
    const double x = i * step;
    psi[i] = w.eval(x, 0);
    if (!(psi[i] > 0.0)) positive = false;
    for (int j = 1; j <= 5; ++j)
      rep.c[j - 1] = std::max(rep.c[j - 1], std::abs(w.eval(x, j)) / psi[i]);
  }

  // Two-sided quasi-monotonicity over unit windows, including the exact
  // window endpoints x +- 1.
  const int reach = static_cast<int>(std::floor(1.0 / step));
  double c_shift = 1.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = i * step;
    const int lo = std::max(0, i - reach);
    const int hi = std::min(n_samples - 1, i + reach);
    for (int j = lo; j <= hi; ++j) c_shift = std::max(c_shift, psi[j] / psi[i]);
    c_shift = std::max(c_shift, w.eval(x + 1.0, 0) / psi[i]);
    if (x >= 1.0) c_shift = std::max(c_shift, w.eval(x - 1.0, 0) / psi[i]);
  }
  rep.c_shift = c_shift;

  rep.pass = positive && std::isfinite(rep.c_shift) && rep.c_shift <= cap;
  for (double c : rep.c) rep.pass = rep.pass && std::isfinite(c) && c <= cap;
  return rep;
}

namespace {

constexpr double kTailSlack = 1.5;

struct SweepResult {
  double inf = 0.0;
  bool ok = false;
};

// log f sampled on [0, x_max]; positive infimum and no decay along the tail.
template <typename LogF>
SweepResult sweep_log(LogF&& logf, double x_max, int n) {
  double min_log = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (int i = 0; i < n; ++i) {
    const double v = logf(i * x_max / (n - 1));
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) finite = false;
    min_log = std::min(min_log, v);
  }
  SweepResult r;
  if (!finite) return r;
  r.inf = std::exp(min_log);
  const double tail_drop = logf(x_max / 2) - logf(x_max);
  r.ok = r.inf > 0.0 && tail_drop <= std::log(kTailSlack);
  return r;
}

} // namespace

HypothesisReport check_theorem_hypotheses(const WeightSpec& w, double p, double q, double x_max,
                                          int n_samples) {
  HypothesisReport rep;
  auto log_psi = [&](double x) { return std::log(w.eval(x, 0)); };
  auto log_dpsi = [&](double x) {
    const double d = w.eval(x, 1);
    return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
  };

  const auto weak = sweep_log(
      [&](double x) { return (2.0 + 3.0 * p) * log_dpsi(x) + (p - 2.0) * log_psi(x); }, x_max,
      n_samples);
  rep.weak_c0 = weak.inf;
  rep.weak_uniqueness_ok = weak.ok && p <= 2.0;

  const auto strong = sweep_log(
      [&](double x) { return log_dpsi(x) + (4.0 * q + 3.0) * log_psi(x); }, x_max, n_samples);
  rep.strong_c0 = strong.inf;
  rep.strong_uniqueness_ok = strong.ok;

  for (int n = 0; n <= 4 && !rep.growth_ok; ++n) {
    auto log_ratio = [&](double x) { return log_psi(x) - n * std::log1p(x) - log_dpsi(x); };
    double max_log = -std::numeric_limits<double>::infinity();
    bool finite = true;
    for (int i = 0; i < n_samples; ++i) {
      const double v = log_ratio(i * x_max / (n_samples - 1));
      if (!std::isfinite(v)) finite = false;
      max_log = std::max(max_log, v);
    }
    if (!finite) break;
    if (log_ratio(x_max) - log_ratio(x_max / 2) <= std::log(kTailSlack)) {
      rep.growth_ok = true;
      rep.growth_n = n;
      rep.growth_c = std::exp(max_log);
    }
  }
  return rep;
}

} // namespace kzk
