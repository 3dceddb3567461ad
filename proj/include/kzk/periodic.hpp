#pragma once

#include "kzk/eigenbasis.hpp"
#include "kzk/nonlinearity.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace kzk {

/// Nonlinear stepping on the periodic box [0, length) x [0, L] used to check
/// the two conservation laws: Crank-Nicolson per Fourier/eigen mode (unitary
/// for the linear part) plus Adams-Bashforth 2 on -g'(u)u_x, 2/3-rule
/// dealiasing in x and the nonlinearity's fraction in y.
class PeriodicSolver {
public:
  PeriodicSolver(EigenBasis basis, double length, int nx, double b, Nonlinearity nl, double dt);

  int nx() const { return nx_; }
  double dx() const { return length_ / nx_; }
  double x(int k) const { return k * dx(); }
  const EigenBasis& basis() const { return basis_; }

  /// y-spectral samples (nx x modes) of f on the box nodes.
  Eigen::MatrixXd project(const std::function<double(double, double)>& f) const;

  void set_state(const Eigen::MatrixXd& coeff);
  Eigen::MatrixXd state() const;
  void step();
  double time() const { return t_; }

  /// int int u^2
  double mass() const;
  /// int int (u_xx^2 + u_x^2 + u_y^2 - 2 g*(u))
  double hamiltonian() const;

private:
  Eigen::MatrixXcd nonlinear_hat(const Eigen::MatrixXcd& h) const;
  Eigen::MatrixXcd fft(const Eigen::MatrixXd& c) const;
  Eigen::MatrixXd ifft(const Eigen::MatrixXcd& h) const;
  Eigen::MatrixXd derivative(const Eigen::MatrixXcd& h, int order) const;

  EigenBasis basis_;
  double length_;
  int nx_;
  double b_;
  Nonlinearity nl_;
  double dt_;
  double t_ = 0.0;
  int keep_x_;
  int keep_y_;
  Eigen::MatrixXcd hat_;
  Eigen::MatrixXd omega_;
  std::optional<Eigen::MatrixXcd> prev_;
};

} // namespace kzk
