#pragma once

#include <Eigen/Dense>

#include <array>

namespace kzk {

/// Ghost-value closure shared by the implicit operator and all diagnostics.
///
/// Left: u = u_x = 0 at x = 0; ghosts u_{-k} come from the polynomial
/// a2 x^2 + a3 x^3 + a4 x^4 through u_1, u_2, u_3.
/// Right: u = u_x = u_xx = 0 at X_max; ghosts u_{N+k} = -k^3 u_{N-1}.
struct Closure {
  /// left(k-1, m-1) is the weight of u_m in the ghost u_{-k}, k, m = 1..3.
  static const Eigen::Matrix3d& left();
  /// Weight of u_{N-1} in the ghost u_{N+k}.
  static double right(int k) { return -static_cast<double>(k * k * k); }
};

constexpr int kGhosts = 3;

/// Copies column u (length nx, u_0 = u_{nx-1} = 0 assumed) into a buffer of
/// length nx + 6 with ghosts filled; index i of u maps to i + 3.
Eigen::VectorXd extend_with_ghosts(const Eigen::Ref<const Eigen::VectorXd>& u);

/// Central x-derivative of order k in 1..5 at every grid point, using
/// 3-point (k = 1, 2), 5-point (k = 3, 4) and 7-point (k = 5) stencils on the
/// ghost-extended column.
Eigen::VectorXd dx_central(const Eigen::Ref<const Eigen::VectorXd>& u, double h, int k);

/// dx_central applied to every column.
Eigen::MatrixXd dx_columns(const Eigen::MatrixXd& u, double h, int k);

/// Stencil coefficients of the order-k central difference at offsets -3..3,
/// without the 1/h^k factor.
const std::array<double, 7>& central_stencil(int k);

/// One-sided second-order u_xx at x = 0 consistent with the left closure:
/// (8 u_1 - u_2) / (2 h^2).
double mu2_trace(const Eigen::Ref<const Eigen::VectorXd>& u, double h);

/// Finite-difference weights on arbitrary nodes: w(j, k) is the weight of
/// f(nodes[j]) in f^{(k)}(z), k = 0..m.
Eigen::MatrixXd fornberg_weights(double z, const Eigen::VectorXd& nodes, int m);

} // namespace kzk
