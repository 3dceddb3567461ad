#include "kzk/inequality_lab.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kzk {

double interpolation_exponent(int m, double q) {
  const bool inf = std::isinf(q) && q > 0;
  if (m == 0) {
    if (!(q >= 2.0)) throw std::invalid_argument("m = 0 needs q in [2, inf]");
  } else if (m == 1) {
    if (!(q >= 2.0 && q <= 6.0)) throw std::invalid_argument("m = 1 needs q in [2, 6]");
  } else {
    throw std::invalid_argument("m must be 0 or 1");
  }
  return (2.0 * m + 3.0) / 8.0 - (inf ? 0.0 : 3.0 / (4.0 * q));
}

double Atom::eval(double x, int order) const {
  switch (kind) {
  case Kind::Gauss: {
    const double z = (x - a) / b;
    const double g = amp * std::exp(-0.5 * z * z);
    if (order == 0) return g;
    if (order == 1) return -z / b * g;
    return (z * z - 1.0) / (b * b) * g;
  }
  case Kind::Exp: {
    const double e = amp * std::exp(-a * x);
    return std::pow(-a, order) * e;
  }
  case Kind::Trig: {
    const double ph = a * x + b;
    if (order == 0) return amp * std::cos(ph);
    if (order == 1) return -amp * a * std::sin(ph);
    return -amp * a * a * std::cos(ph);
  }
  }
  return 0.0;
}

namespace {

double eval_atoms(const std::vector<Atom>& atoms, double x, int order) {
  double s = 0.0;
  for (const auto& at : atoms) s += at.eval(x, order);
  return s;
}

double eval_y(const TestFunction& f, const TestFunction::Term& t, double y, int order) {
  if (t.mode >= 0) return f.basis->eval(t.mode, y, order);
  return eval_atoms(t.y_atoms, y, order);
}

Eigen::VectorXd trapezoid(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w(0) *= 0.5;
  w(n - 1) *= 0.5;
  return w;
}

double l2sq(const Sampled& s, const Eigen::MatrixXd& v, const Eigen::VectorXd& weight) {
  return s.wx.dot(weight.asDiagonal() * v.array().square().matrix() * s.wy);
}

Eigen::VectorXd weight_on(const Sampled& s, const WeightSpec& w, double power) {
  Eigen::VectorXd v(s.x.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::pow(w.eval(s.x(i), 0), power);
  return v;
}

} // namespace

double TestFunction::eval(double x, double y, int kx, int ky) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coeff * eval_atoms(t.x, x, kx) * eval_y(*this, t, y, ky);
  return s;
}

Sampled sample(const TestFunction& f, double X_max, int nx, double L, int ny, double x0) {
  Sampled s;
  s.x = Eigen::VectorXd::LinSpaced(nx, x0, x0 + X_max);
  s.y = Eigen::VectorXd::LinSpaced(ny, 0.0, L);
  s.wx = trapezoid(nx, X_max / (nx - 1));
  s.wy = trapezoid(ny, L / (ny - 1));
  const int nt = static_cast<int>(f.terms.size());
  Eigen::MatrixXd X0(nx, nt), X1(nx, nt), X2(nx, nt), Y0(ny, nt), Y1(ny, nt);
  for (int t = 0; t < nt; ++t) {
    const auto& term = f.terms[t];
    for (int i = 0; i < nx; ++i) {
      X0(i, t) = term.coeff * eval_atoms(term.x, s.x(i), 0);
      X1(i, t) = term.coeff * eval_atoms(term.x, s.x(i), 1);
      X2(i, t) = term.coeff * eval_atoms(term.x, s.x(i), 2);
    }
    for (int j = 0; j < ny; ++j) {
      Y0(j, t) = eval_y(f, term, s.y(j), 0);
      Y1(j, t) = eval_y(f, term, s.y(j), 1);
    }
  }
  s.phi = X0 * Y0.transpose();
  s.phi_x = X1 * Y0.transpose();
  s.phi_xx = X2 * Y0.transpose();
  s.phi_y = X0 * Y1.transpose();
  return s;
}

Ensemble make_ensemble(const EnsembleSpec& spec) {
  if (spec.size < 1 || spec.y_modes < 1) throw std::invalid_argument("empty ensemble spec");
  auto basis = std::make_shared<const EigenBasis>(spec.family, spec.L, spec.y_modes);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * 0.5 * (u(rng) + 1.0); };

  Ensemble e;
  e.spec = spec;
  const int modes = basis->count();
  for (int k = 0; k < spec.size; ++k) {
    TestFunction f;
    f.basis = basis;
    for (int l = 0; l < std::min(modes, spec.y_modes); ++l) {
      TestFunction::Term t;
      t.coeff = u(rng);
      t.mode = l;
      for (int g = 0; g < spec.bumps; ++g)
        t.x.push_back({Atom::Kind::Gauss, u(rng), range(0.5, 6.0), range(0.3, 2.0)});
      t.x.push_back({Atom::Kind::Exp, u(rng), range(0.5, 2.0), 0.0});
      if (spec.vanish_at_zero) {
        const double p0 = eval_atoms(t.x, 0.0, 0);
        t.x.push_back({Atom::Kind::Exp, -p0, range(0.5, 2.0), 0.0});
      }
      f.terms.push_back(std::move(t));
    }
    e.members.push_back(std::move(f));
  }
  return e;
}

Ensemble refine(const Ensemble& e, int factor) {
  Ensemble r = e;
  r.spec.nx = (e.spec.nx - 1) * factor + 1;
  r.spec.ny = (e.spec.ny - 1) * factor + 1;
  return r;
}

Ensemble make_box_ensemble(const EnsembleSpec& spec) {
  auto basis = std::make_shared<const EigenBasis>(BCFamily::B_NeumannNeumann, spec.L, 1);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(0, 3);
  constexpr double pi = 3.14159265358979323846;
  Ensemble e;
  e.spec = spec;
  e.spec.X_max = 1.0;
  for (int k = 0; k < spec.size; ++k) {
    TestFunction f;
    f.basis = basis;
    for (int t = 0; t < 3; ++t) {
      TestFunction::Term term;
      term.coeff = u(rng);
      term.x.push_back({Atom::Kind::Trig, 1.0, pi * freq(rng), pi * u(rng)});
      term.y_atoms.push_back({Atom::Kind::Trig, 1.0, pi * freq(rng) / spec.L, pi * u(rng)});
      f.terms.push_back(std::move(term));
    }
    e.members.push_back(std::move(f));
  }
  return e;
}

Lemma21Report check_lemma21(int m, double q, const WeightSpec& psi1, const WeightSpec& psi2,
                            const Ensemble& ens, double scale) {
  Lemma21Report rep;
  rep.m = m;
  rep.q = q;
  rep.s = interpolation_exponent(m, q);
  const auto& sp = ens.spec;
  const bool inf = std::isinf(q);
  for (const auto& f : ens.members) {
    Sampled s = sample(f, sp.X_max, sp.nx, sp.L, sp.ny);
    s.phi *= scale;
    s.phi_x *= scale;
    s.phi_xx *= scale;
    s.phi_y *= scale;
    const Eigen::MatrixXd& d = m == 0 ? s.phi : s.phi_x;
    const Eigen::VectorXd wl = (weight_on(s, psi1, rep.s).array() *
                                weight_on(s, psi2, 0.5 - rep.s).array()).matrix();
    const Eigen::MatrixXd g = (wl.asDiagonal() * d).cwiseAbs();
    double lhs;
    if (inf) {
      lhs = g.maxCoeff();
    } else {
      lhs = std::pow(s.wx.dot(g.array().pow(q).matrix() * s.wy), 1.0 / q);
    }
    const Eigen::MatrixXd comb = s.phi_xx.cwiseAbs() + s.phi_y.cwiseAbs() + s.phi.cwiseAbs();
    const double a = std::sqrt(l2sq(s, comb, weight_on(s, psi1, 1.0)));
    const double b = std::sqrt(l2sq(s, s.phi, weight_on(s, psi2, 1.0)));
    const double rhs = std::pow(a, 2.0 * rep.s) * std::pow(b, 1.0 - 2.0 * rep.s);
    double r = 0.0;
    if (rhs > 0.0) {
      r = lhs / rhs;
    } else if (lhs > 0.0) {
      throw std::logic_error("interpolation check: RHS vanishes with LHS > 0");
    }
    if (!std::isfinite(r)) rep.finite = false;
    rep.ratios.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  return rep;
}

Lemma22Report check_lemma22(const WeightSpec& psi, const Ensemble& ens) {
  Lemma22Report rep;
  const auto& sp = ens.spec;
  for (const auto& f : ens.members) {
    const Sampled s = sample(f, sp.X_max, sp.nx, sp.L, sp.ny);
    const Eigen::VectorXd w = weight_on(s, psi, 1.0);
    const double ax = l2sq(s, s.phi_x, w);
    const double axx = l2sq(s, s.phi_xx, w);
    const double a0 = l2sq(s, s.phi, w);
    const double trace = s.phi_x.row(0).array().square().matrix().dot(s.wy);

    const double gm_mass = std::sqrt(axx * a0);
    const double gm_grad = std::pow(axx, 0.75) * std::pow(a0, 0.25);
    const double r_mass = ax > 0.0 ? ax / (gm_mass + a0) : 0.0;
    const double r_grad = trace > 0.0 ? trace / (gm_grad + a0) : 0.0;
    rep.ratios_mass.push_back(r_mass);
    rep.ratios_grad.push_back(r_grad);
    rep.c_mass = std::max(rep.c_mass, r_mass);
    rep.c_grad = std::max(rep.c_grad, r_grad);
    if (gm_mass > 0.0) rep.c_mass_gm = std::max(rep.c_mass_gm, ax / gm_mass);
    if (gm_grad > 0.0) rep.c_grad_gm = std::max(rep.c_grad_gm, trace / gm_grad);
    if (!std::isfinite(r_mass) || !std::isfinite(r_grad)) rep.finite = false;
  }
  return rep;
}

AnisotropicReport check_base_anisotropic(const Ensemble& box, const Ensemble& strip) {
  AnisotropicReport rep;
  const auto& bs = box.spec;
  for (const auto& f : box.members) {
    const Sampled s = sample(f, 1.0, bs.nx, bs.L, bs.ny);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(s.x.size());
    const double h = l2sq(s, s.phi_xx, one) + l2sq(s, s.phi_y, one) + l2sq(s, s.phi, one);
    const double m = l2sq(s, s.phi, one);
    const double sup = s.phi.cwiseAbs().maxCoeff();
    const double r = sup > 0.0 ? sup / (std::pow(h, 3.0 / 8.0) * std::pow(m, 1.0 / 8.0)) : 0.0;
    rep.ratios_box.push_back(r);
    rep.c_box = std::max(rep.c_box, r);
    if (!std::isfinite(r)) rep.finite = false;
  }
  const auto& ss = strip.spec;
  for (const auto& f : strip.members) {
    const Sampled s = sample(f, ss.X_max, ss.nx, ss.L, ss.ny);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(s.x.size());
    const double h = l2sq(s, s.phi_xx, one) + l2sq(s, s.phi_y, one) + l2sq(s, s.phi, one);
    const double l6 = std::pow(s.wx.dot(s.phi_x.array().pow(6).matrix() * s.wy), 1.0 / 6.0);
    const double r = l6 > 0.0 ? l6 / std::sqrt(h) : 0.0;
    rep.ratios_strip.push_back(r);
    rep.c_strip = std::max(rep.c_strip, r);
    if (!std::isfinite(r)) rep.finite = false;
  }
  return rep;
}

} // namespace kzk
