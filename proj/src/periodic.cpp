#include "kzk/periodic.hpp"

#include "kzk/fft.hpp"
#include "kzk/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace kzk {

PeriodicSolver::PeriodicSolver(EigenBasis basis, double length, int nx, double b, Nonlinearity nl,
                               double dt)
    : basis_(std::move(basis)), length_(length), nx_(nx), b_(b), nl_(nl), dt_(dt) {
  if (nx < 8 || nx % 2) throw std::invalid_argument("periodic mode needs an even nx >= 8");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const int nh = nx_ / 2 + 1;
  keep_x_ = nx_ / 3;
  const int m = basis_.count();
  keep_y_ = std::max(1, m - static_cast<int>(std::floor(nl_.dealias_fraction() * m)));
  omega_.resize(nh, m);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < nh; ++k)
      omega_(k, l) = dispersion(2.0 * std::numbers::pi * k / length_, basis_.lambda(l), b_);
  hat_ = Eigen::MatrixXcd::Zero(nh, m);
}

Eigen::MatrixXd PeriodicSolver::project(const std::function<double(double, double)>& f) const {
  Eigen::MatrixXd v(nx_, basis_.n_nodes());
  const auto& y = basis_.nodes();
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < basis_.n_nodes(); ++j) v(i, j) = f(x(i), y(j));
  return v * basis_.analysis().transpose();
}

void PeriodicSolver::set_state(const Eigen::MatrixXd& coeff) {
  if (coeff.rows() != nx_ || coeff.cols() != basis_.count())
    throw std::invalid_argument("periodic state does not match the box");
  hat_ = rfft_columns(coeff);
  hat_.row(nx_ / 2).setZero();
  prev_.reset();
  t_ = 0.0;
}

Eigen::MatrixXd PeriodicSolver::state() const { return irfft_columns(hat_, nx_); }

Eigen::MatrixXd PeriodicSolver::derivative(const Eigen::MatrixXcd& h, int order) const {
  Eigen::MatrixXcd d = h;
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k < d.rows(); ++k) d.row(k) *= std::pow(i * (2.0 * std::numbers::pi * k / length_), order);
  return irfft_columns(d, nx_);
}

Eigen::MatrixXcd PeriodicSolver::nonlinear_hat(const Eigen::MatrixXcd& h) const {
  const int nh = nx_ / 2 + 1;
  if (nl_.is_zero()) return Eigen::MatrixXcd::Zero(nh, basis_.count());
  Eigen::MatrixXcd f = h;
  f.bottomRows(nh - keep_x_ - 1).setZero();
  const int cut = basis_.count() - keep_y_;
  if (cut > 0) f.rightCols(cut).setZero();
  const Eigen::MatrixXd& psi = basis_.synthesis();
  const Eigen::MatrixXd up = irfft_columns(f, nx_) * psi.transpose();
  const Eigen::MatrixXd ux = derivative(f, 1) * psi.transpose();
  const Eigen::MatrixXd prod = up.unaryExpr([this](double v) { return nl_.gprime(v); }).cwiseProduct(ux);
  Eigen::MatrixXcd r = rfft_columns(-prod * basis_.analysis().transpose());
  r.bottomRows(nh - keep_x_ - 1).setZero();
  if (cut > 0) r.rightCols(cut).setZero();
  return r;
}

void PeriodicSolver::step() {
  const std::complex<double> i(0.0, 1.0);
  const Eigen::ArrayXXcd plus = 1.0 + 0.5 * dt_ * i * omega_.array().cast<std::complex<double>>();
  const Eigen::ArrayXXcd minus = 1.0 - 0.5 * dt_ * i * omega_.array().cast<std::complex<double>>();
  if (nl_.is_zero()) {
    hat_ = (hat_.array() * plus / minus).matrix();
  } else {
    const Eigen::MatrixXcd n0 = nonlinear_hat(hat_);
    Eigen::MatrixXcd src;
    if (!prev_) {
      const Eigen::ArrayXXcd hp = 1.0 + 0.25 * dt_ * i * omega_.array().cast<std::complex<double>>();
      const Eigen::ArrayXXcd hm = 1.0 - 0.25 * dt_ * i * omega_.array().cast<std::complex<double>>();
      const Eigen::MatrixXcd half = ((hat_.array() * hp + 0.5 * dt_ * n0.array()) / hm).matrix();
      src = nonlinear_hat(half);
    } else {
      src = 1.5 * n0 - 0.5 * (*prev_);
    }
    prev_ = n0;
    hat_ = ((hat_.array() * plus + dt_ * src.array()) / minus).matrix();
  }
  t_ += dt_;
}

double PeriodicSolver::mass() const { return state().squaredNorm() * dx(); }

double PeriodicSolver::hamiltonian() const {
  const Eigen::MatrixXd u = state();
  const Eigen::MatrixXd ux = derivative(hat_, 1);
  const Eigen::MatrixXd uxx = derivative(hat_, 2);
  double e = (uxx.squaredNorm() + ux.squaredNorm() +
              (u.array().square().rowwise() * basis_.lambdas().transpose().array()).sum()) *
             dx();
  if (!nl_.is_zero()) {
    const Eigen::MatrixXd up = u * basis_.synthesis().transpose();
    const Eigen::MatrixXd gs = up.unaryExpr([this](double v) { return nl_.gstar(v); });
    e -= 2.0 * dx() * (gs * basis_.weights()).sum();
  }
  return e;
}

} // namespace kzk
