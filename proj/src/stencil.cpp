#include "kzk/stencil.hpp"

#include <cmath>
#include <stdexcept>

namespace kzk {

const Eigen::Matrix3d& Closure::left() {
  static const Eigen::Matrix3d weights = [] {
    // rows j = 1..3 of u_j = a2 j^2 + a3 j^3 + a4 j^4
    Eigen::Matrix3d fit;
    Eigen::Matrix3d ghost;
    for (int j = 1; j <= 3; ++j) {
      fit(j - 1, 0) = j * j;
      fit(j - 1, 1) = j * j * j;
      fit(j - 1, 2) = j * j * j * j;
      ghost(j - 1, 0) = j * j;
      ghost(j - 1, 1) = -j * j * j;
      ghost(j - 1, 2) = j * j * j * j;
    }
    return Eigen::Matrix3d(ghost * fit.inverse());
  }();
  return weights;
}

Eigen::VectorXd extend_with_ghosts(const Eigen::Ref<const Eigen::VectorXd>& u) {
  const Eigen::Index n = u.size();
  Eigen::VectorXd e(n + 2 * kGhosts);
  e.segment(kGhosts, n) = u;
  const Eigen::Vector3d inner = u.segment(1, 3);
  const Eigen::Vector3d g = Closure::left() * inner;
  for (int k = 1; k <= kGhosts; ++k) {
    e(kGhosts - k) = g(k - 1);
    e(kGhosts + n - 1 + k) = Closure::right(k) * u(n - 2);
  }
  return e;
}

const std::array<double, 7>& central_stencil(int k) {
  static const std::array<std::array<double, 7>, 5> table{{
      {0, 0, -0.5, 0, 0.5, 0, 0},
      {0, 0, 1, -2, 1, 0, 0},
      {0, -0.5, 1, 0, -1, 0.5, 0},
      {0, 1, -4, 6, -4, 1, 0},
      {-0.5, 2, -2.5, 0, 2.5, -2, 0.5},
  }};
  if (k < 1 || k > 5) throw std::invalid_argument("central stencil order must be in 1..5");
  return table[k - 1];
}

Eigen::VectorXd dx_central(const Eigen::Ref<const Eigen::VectorXd>& u, double h, int k) {
  const auto& s = central_stencil(k);
  const Eigen::VectorXd e = extend_with_ghosts(u);
  const double scale = 1.0 / std::pow(h, k);
  Eigen::VectorXd d(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double acc = 0.0;
    for (int o = 0; o < 7; ++o)
      if (s[o] != 0.0) acc += s[o] * e(i + o);
    d(i) = acc * scale;
  }
  return d;
}

Eigen::MatrixXd dx_columns(const Eigen::MatrixXd& u, double h, int k) {
  Eigen::MatrixXd d(u.rows(), u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) d.col(c) = dx_central(u.col(c), h, k);
  return d;
}

double mu2_trace(const Eigen::Ref<const Eigen::VectorXd>& u, double h) {
  return (8.0 * u(1) - u(2)) / (2.0 * h * h);
}

Eigen::MatrixXd fornberg_weights(double z, const Eigen::VectorXd& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  if (n < m) throw std::invalid_argument("not enough nodes for the derivative order");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, m + 1);
  double c1 = 1.0;
  double c4 = x(0) - z;
  c(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x(i) - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

} // namespace kzk
