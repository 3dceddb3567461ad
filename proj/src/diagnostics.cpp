#include "kzk/diagnostics.hpp"

#include "kzk/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kzk {

namespace {

// sum_l c(i, l)^2 * scale_l for every x node
Eigen::VectorXd y_density(const Eigen::MatrixXd& c, const Eigen::VectorXd& scale) {
  return (c.array().square().rowwise() * scale.transpose().array()).rowwise().sum();
}

Eigen::VectorXd y_density(const Eigen::MatrixXd& c) { return c.array().square().rowwise().sum(); }

Eigen::VectorXd sample_weight(const Grid& g, const WeightSpec& w, int order) {
  Eigen::VectorXd v(g.nx);
  for (int i = 0; i < g.nx; ++i) v(i) = w.eval(g.x(i), order);
  return v;
}

double integrate_physical(const Grid& g, const Eigen::MatrixXd& v) {
  return x_trapezoid(g).dot(v * g.basis.weights());
}

} // namespace

Eigen::VectorXd x_trapezoid(const Grid& grid) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(grid.nx, grid.dx());
  w(0) *= 0.5;
  w(grid.nx - 1) *= 0.5;
  return w;
}

double mass(const Field& u) { return x_trapezoid(u.grid()).dot(y_density(u.coeff())); }

WeightedMassResult weighted_mass_checked(const Field& u, const WeightSpec& w) {
  const Grid& g = u.grid();
  const Eigen::VectorXd dens = y_density(u.coeff()).cwiseProduct(sample_weight(g, w, 0));
  const Eigen::VectorXd tw = x_trapezoid(g);
  WeightedMassResult r;
  r.value = tw.dot(dens);
  const int tail = std::max(1, g.nx / 20);
  const double tail_part = tw.tail(tail).dot(dens.tail(tail));
  r.reliable = std::isfinite(r.value) && !(tail_part > 1e-6 * r.value);
  return r;
}

double weighted_mass(const Field& u, const WeightSpec& w) { return weighted_mass_checked(u, w).value; }

double h1_energy(const Field& u, const Nonlinearity& nl) {
  const Grid& g = u.grid();
  const double h = g.dx();
  const Eigen::MatrixXd& c = u.coeff();
  Eigen::VectorXd dens = y_density(dx_columns(c, h, 2)) + y_density(dx_columns(c, h, 1)) +
                         y_density(c, g.basis.lambdas());
  double e = x_trapezoid(g).dot(dens);
  if (!nl.is_zero()) {
    const Eigen::MatrixXd gs = u.physical().unaryExpr([&](double v) { return nl.gstar(v); });
    e -= 2.0 * integrate_physical(g, gs);
  }
  return e;
}

double strong_weighted_norm(const Field& u, const WeightSpec& w) {
  const Grid& g = u.grid();
  const double h = g.dx();
  const Eigen::MatrixXd& c = u.coeff();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.modes());
  const Eigen::VectorXd dens = y_density(dx_columns(c, h, 2)) + y_density(dx_columns(c, h, 1)) +
                               y_density(c, g.basis.lambdas() + ones);
  return x_trapezoid(g).dot(dens.cwiseProduct(sample_weight(g, w, 0)));
}

Eigen::VectorXd boundary_trace_mu2(const Field& u) {
  const Grid& g = u.grid();
  Eigen::VectorXd m(g.modes());
  for (int l = 0; l < g.modes(); ++l) m(l) = mu2_trace(u.coeff().col(l), g.dx());
  return g.basis.synthesis() * m;
}

double mu2_norm(const Field& u) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (int l = 0; l < g.modes(); ++l) s += std::pow(mu2_trace(u.coeff().col(l), g.dx()), 2);
  return s;
}

std::string lambda_field_name(LambdaField f) {
  switch (f) {
  case LambdaField::Uxx: return "u_xx";
  case LambdaField::Uy: return "u_y";
  case LambdaField::Uxxxx: return "u_xxxx";
  case LambdaField::Uyy: return "u_yy";
  }
  return "?";
}

LambdaField parse_lambda_field(const std::string& name) {
  if (name == "u_xx") return LambdaField::Uxx;
  if (name == "u_y") return LambdaField::Uy;
  if (name == "u_xxxx") return LambdaField::Uxxxx;
  if (name == "u_yy") return LambdaField::Uyy;
  throw std::invalid_argument("unknown lambda_plus field '" + name + "'");
}

LambdaPlusAccumulator::LambdaPlusAccumulator(const Grid& grid, LambdaField f) : field(f) {
  const int w = static_cast<int>(std::lround(1.0 / grid.dx()));
  windows = Eigen::VectorXd::Zero(std::max(1, grid.nx - w));
}

void lambda_plus_update(LambdaPlusAccumulator& acc, const Field& u, double dt) {
  const Grid& g = u.grid();
  const double h = g.dx();
  const Eigen::MatrixXd& c = u.coeff();
  Eigen::VectorXd dens;
  switch (acc.field) {
  case LambdaField::Uxx: dens = y_density(dx_columns(c, h, 2)); break;
  case LambdaField::Uy: dens = y_density(c, g.basis.lambdas()); break;
  case LambdaField::Uxxxx: dens = y_density(dx_columns(c, h, 4)); break;
  case LambdaField::Uyy: dens = y_density(c, g.basis.lambdas().array().square().matrix()); break;
  }
  Eigen::VectorXd cum(g.nx);
  cum(0) = 0.0;
  for (int i = 1; i < g.nx; ++i) cum(i) = cum(i - 1) + 0.5 * h * (dens(i - 1) + dens(i));
  // a domain shorter than one window collapses to a single full-width window
  const int n = static_cast<int>(acc.windows.size());
  const int w = g.nx - n;
  for (int i = 0; i < n; ++i) acc.windows(i) += dt * (cum(i + w) - cum(i));
}

namespace {

struct SpatialTerms {
  double d1 = 0, d3 = 0, d5 = 0, boundary = 0, forcing = 0, nonlinear = 0;
};

SpatialTerms spatial_terms(const Field& u, double t, const WeightSpec& w, const Nonlinearity& nl,
                           double b, const Forcing& forcing) {
  const Grid& g = u.grid();
  const double h = g.dx();
  const Eigen::MatrixXd& c = u.coeff();
  const Eigen::VectorXd tw = x_trapezoid(g);
  const Eigen::VectorXd r1 = sample_weight(g, w, 1);
  const Eigen::VectorXd r3 = sample_weight(g, w, 3);
  const Eigen::VectorXd r5 = sample_weight(g, w, 5);
  const Eigen::VectorXd uu = y_density(c);
  const Eigen::VectorXd ux = y_density(dx_columns(c, h, 1));
  const Eigen::VectorXd uxx = y_density(dx_columns(c, h, 2));
  const Eigen::VectorXd uy = y_density(c, g.basis.lambdas());

  SpatialTerms s;
  s.d1 = tw.dot((5.0 * uxx + 3.0 * ux + uy - b * uu).cwiseProduct(r1));
  s.d3 = -tw.dot((5.0 * ux + uu).cwiseProduct(r3));
  s.d5 = tw.dot(uu.cwiseProduct(r5));
  s.boundary = w.eval(0.0, 0) * mu2_norm(u);

  if (forcing || !nl.is_zero()) {
    const Eigen::MatrixXd up = u.physical();
    const auto& y = g.basis.nodes();
    if (forcing) {
      Eigen::MatrixXd fu(g.nx, g.ny());
      for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny(); ++j)
          fu(i, j) = forcing(t, g.x(i), y(j)) * up(i, j) * w.eval(g.x(i), 0);
      s.forcing = 2.0 * integrate_physical(g, fu);
    }
    if (!nl.is_zero()) {
      Eigen::MatrixXd nu = up.unaryExpr([&](double v) { return nl.gprime_u_star(v); });
      nu = r1.asDiagonal() * nu;
      s.nonlinear = 2.0 * integrate_physical(g, nu);
    }
  }
  return s;
}

} // namespace

IdentityResidual energy_identity_residual(const std::vector<double>& times,
                                          const std::vector<Field>& snaps, const WeightSpec& w,
                                          const Nonlinearity& nl, double b, const Forcing& forcing) {
  if (times.size() != snaps.size()) throw std::invalid_argument("times and snapshots differ in length");
  const int n = static_cast<int>(times.size());
  if (n < 3) throw std::invalid_argument("identity residual needs at least 3 snapshots");
  const double delta = times[1] - times[0];
  for (int k = 1; k < n; ++k)
    if (std::abs(times[k] - times[k - 1] - delta) > 1e-9 * std::max(1.0, std::abs(delta)))
      throw std::invalid_argument("snapshots are not uniformly spaced");

  std::vector<double> wm(n);
  for (int k = 0; k < n; ++k) wm[k] = weighted_mass(snaps[k], w);

  IdentityResidual out;
  std::vector<SpatialTerms> terms(n);
  for (int k = 1; k < n - 1; ++k) terms[k] = spatial_terms(snaps[k], times[k], w, nl, b, forcing);

  auto evaluate = [&](int k, int stride) {
    const SpatialTerms& s = terms[k];
    IdentitySample r;
    r.t = times[k];
    r.dmass_dt = (wm[k + stride] - wm[k - stride]) / (2.0 * stride * delta);
    r.d1_term = s.d1;
    r.d3_term = s.d3;
    r.d5_term = s.d5;
    r.boundary = s.boundary;
    r.forcing = s.forcing;
    r.nonlinear = s.nonlinear;
    r.residual = r.dmass_dt + r.d1_term + r.d3_term + r.d5_term + r.boundary - r.forcing - r.nonlinear;
    for (double v : {r.dmass_dt, r.d1_term, r.d3_term, r.d5_term, r.boundary, r.forcing, r.nonlinear})
      r.largest = std::max(r.largest, std::abs(v));
    return r;
  };

  double largest = 0.0;
  for (int k = 1; k < n - 1; ++k) {
    out.samples.push_back(evaluate(k, 1));
    out.max_abs = std::max(out.max_abs, std::abs(out.samples.back().residual));
    largest = std::max(largest, out.samples.back().largest);
  }
  out.max_relative = largest > 0.0 ? out.max_abs / largest : 0.0;

  if (n >= 5) {
    double r1 = 0.0, r2 = 0.0;
    for (int k = 2; k < n - 2; ++k) {
      r1 = std::max(r1, std::abs(evaluate(k, 1).residual));
      r2 = std::max(r2, std::abs(evaluate(k, 2).residual));
    }
    const double lo = std::min(r1, r2), hi = std::max(r1, r2);
    out.cadence_too_coarse = hi > 2.0 * lo && hi > 0.0;
  }
  return out;
}

DecayConstants decay_constants(double b, double L, BCFamily family, double p) {
  using std::numbers::pi;
  if (!(L > 0.0)) throw std::invalid_argument("strip width L must be positive");
  DecayConstants d;
  d.b = b;
  d.L = L;
  d.p = p;
  d.kappa = steklov_kappa(family);
  d.beta = pi * pi / (10.0 * d.kappa * L * L);
  if (b > 0.0) d.L0 = pi / std::sqrt(20.0 * d.kappa * b);
  d.admissible = !(b > 0.0 && L >= d.L0);

  auto gate = [](double a) { return 8.0 * a * a + 32.0 * a * a * a * a; };
  double lo = 0.0, hi = std::sqrt(0.1);
  if (gate(hi) <= d.beta) {
    d.alpha0 = hi;
  } else {
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (gate(mid) <= d.beta ? lo : hi) = mid;
    }
    d.alpha0 = lo;
  }
  return d;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& m, double t_start,
                   double floor) {
  if (t.size() != m.size()) throw std::invalid_argument("decay_fit: series lengths differ");
  const double kFloor = std::max(floor, kFitUnderflow);
  std::vector<double> ts, ls;
  int window = 0;
  DecayFit fit;
  for (size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_start) continue;
    ++window;
    if (!(m[k] > kFloor) || !std::isfinite(m[k])) {
      fit.truncated = true;
      continue;
    }
    ts.push_back(t[k]);
    ls.push_back(std::log(m[k]));
  }
  if (window < 20) throw std::invalid_argument("decay_fit needs at least 20 samples after t_start");
  fit.used = static_cast<int>(ts.size());
  if (fit.used < 3) {
    fit.rate = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const Eigen::Map<const Eigen::VectorXd> x(ts.data(), fit.used), y(ls.data(), fit.used);
  const double xm = x.mean(), ym = y.mean();
  const Eigen::ArrayXd dx = x.array() - xm, dy = y.array() - ym;
  const double sxx = dx.square().sum();
  const double slope = (dx * dy).sum() / sxx;
  const double sse = (dy - slope * dx).square().sum();
  fit.rate = -slope;
  fit.stderr_rate = std::sqrt(sse / (fit.used - 2) / sxx);
  return fit;
}

} // namespace kzk
