#include "kzk/oracle.hpp"

#include "kzk/fft.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace kzk {

double dispersion(double xi, double lambda, double b) {
  const double x2 = xi * xi;
  return xi * (x2 * x2 + x2 + lambda - b);
}

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  nodes = mid + half * es.eigenvalues().array();
  weights = 2.0 * half * es.eigenvectors().row(0).transpose().array().square();
}

LinearOracle::LinearOracle(EigenBasis basis, double length, int nx, double b)
    : basis_(std::move(basis)), length_(length), nx_(nx), b_(b) {
  if (!(length > 0.0)) throw std::invalid_argument("oracle box length must be positive");
  if (nx < 8) throw std::invalid_argument("oracle needs nx >= 8");
}

double LinearOracle::xi(int k) const { return 2.0 * std::numbers::pi * k / length_; }

Eigen::MatrixXd LinearOracle::project(const std::function<double(double, double)>& f) const {
  Eigen::MatrixXd v(nx_, basis_.n_nodes());
  const auto& y = basis_.nodes();
  for (int i = 0; i < nx_; ++i)
    for (int j = 0; j < basis_.n_nodes(); ++j) v(i, j) = f(x(i), y(j));
  return v * basis_.analysis().transpose();
}

OracleResult LinearOracle::evolve(const Eigen::MatrixXd& u0, double t, const Forcing& forcing,
                                  int n_quad, double tail_tol) const {
  if (t < 0.0) throw std::invalid_argument("oracle evolve needs t >= 0");
  if (u0.rows() != nx_ || u0.cols() > basis_.count())
    throw std::invalid_argument("oracle data does not match the box");
  OracleResult res;
  if (t == 0.0 && !forcing) {
    res.coeff = u0;
    res.tail_fraction = tail_fraction(u0);
    res.tail_ok = res.tail_fraction <= tail_tol;
    return res;
  }
  const int modes = static_cast<int>(u0.cols());
  const int nh = nx_ / 2 + 1;
  Eigen::MatrixXcd h = rfft_columns(u0);
  if (nx_ % 2 == 0) h.row(nh - 1).setZero();
  for (int l = 0; l < modes; ++l)
    for (int k = 0; k < nh; ++k) h(k, l) *= std::polar(1.0, dispersion(xi(k), basis_.lambda(l), b_) * t);

  if (forcing && t > 0.0) {
    Eigen::VectorXd tau, w;
    gauss_legendre(n_quad, 0.0, t, tau, w);
    for (int q = 0; q < n_quad; ++q) {
      const double tq = tau(q);
      Eigen::MatrixXcd fh = rfft_columns(project([&](double xx, double yy) { return forcing(tq, xx, yy); })
                                    .leftCols(modes));
      if (nx_ % 2 == 0) fh.row(nh - 1).setZero();
      for (int l = 0; l < modes; ++l)
        for (int k = 0; k < nh; ++k)
          h(k, l) += w(q) * fh(k, l) *
                     std::polar(1.0, dispersion(xi(k), basis_.lambda(l), b_) * (t - tq));
    }
  }
  res.coeff = irfft_columns(h, nx_);
  res.tail_fraction = tail_fraction(res.coeff);
  res.tail_ok = res.tail_fraction <= tail_tol;
  return res;
}

double LinearOracle::norm2(const Eigen::MatrixXd& c) const { return c.squaredNorm() * dx(); }

double LinearOracle::tail_fraction(const Eigen::MatrixXd& c) const {
  const double total = c.squaredNorm();
  if (total == 0.0) return 0.0;
  const int edge = std::max(1, nx_ / 20);
  return (c.topRows(edge).squaredNorm() + c.bottomRows(edge).squaredNorm()) / total;
}

} // namespace kzk
