#pragma once

#include "kzk/diagnostics.hpp"
#include "kzk/eigenbasis.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kzk {

/// omega = xi^5 + xi^3 + xi lambda - b xi; a mode e^{i xi x} evolves as e^{i omega t}.
double dispersion(double xi, double lambda, double b);

/// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct OracleResult {
  Eigen::MatrixXd coeff;       ///< nx x modes, y-spectral, on the periodic box nodes
  double tail_fraction = 0.0;  ///< share of int u^2 within 5% of either box edge at time t
  bool tail_ok = true;         ///< tail_fraction below the configured tolerance
};

/// Exact linear evolution on the periodic box [0, length) x [0, L]: FFT in x,
/// eigen-expansion in y. The Nyquist coefficient (even nx) is dropped so the
/// evolved field stays real.
class LinearOracle {
public:
  LinearOracle(EigenBasis basis, double length, int nx, double b);

  const EigenBasis& basis() const { return basis_; }
  double length() const { return length_; }
  int nx() const { return nx_; }
  double dx() const { return length_ / nx_; }
  double x(int k) const { return k * dx(); }
  double xi(int k) const;

  /// Samples f(x, y) on the box nodes and projects onto the y-basis.
  Eigen::MatrixXd project(const std::function<double(double, double)>& f) const;

  /// Evolves y-spectral data u0 (nx x modes) to time t. With a forcing the
  /// Duhamel integral uses n_quad Gauss-Legendre nodes in tau.
  OracleResult evolve(const Eigen::MatrixXd& u0, double t, const Forcing& forcing = {},
                      int n_quad = 32, double tail_tol = 1e-6) const;

  /// Discrete int int u^2 over the box (Parseval in y).
  double norm2(const Eigen::MatrixXd& coeff) const;
  double tail_fraction(const Eigen::MatrixXd& coeff) const;

private:
  EigenBasis basis_;
  double length_;
  int nx_;
  double b_;
};

} // namespace kzk
