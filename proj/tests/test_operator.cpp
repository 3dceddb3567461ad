#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kzk/linear_operator.hpp"
#include "kzk/nonlinearity.hpp"
#include "kzk/stencil.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace kzk;
using cd = std::complex<double>;

namespace {

/// Derivatives of exp(p(x)) with p quadratic, via g^(n) = P_n g.
struct GaussWave {
  double c, s, k;
  double deriv(double x, int n) const {
    // p(x) = -(x - c)^2 / (2 s^2) + i k x; coefficients in powers of x
    std::vector<cd> p1{cd(c / (s * s), k), cd(-1.0 / (s * s), 0)};  // p'
    std::vector<cd> P{1.0};
    for (int m = 0; m < n; ++m) {
      std::vector<cd> q(P.size() + 1, 0.0);
      for (size_t j = 1; j < P.size(); ++j) q[j - 1] += double(j) * P[j];
      for (size_t j = 0; j < P.size(); ++j) {
        q[j] += P[j] * p1[0];
        q[j + 1] += P[j] * p1[1];
      }
      P = q;
    }
    cd v = 0.0, xp = 1.0;
    for (const auto& a : P) {
      v += a * xp;
      xp *= x;
    }
    const cd g = std::exp(cd(-(x - c) * (x - c) / (2 * s * s), k * x));
    return (v * g).imag();
  }
};

Eigen::VectorXd sample(int nx, double h, const std::function<double(double)>& f) {
  Eigen::VectorXd v(nx);
  for (int i = 0; i < nx; ++i) v(i) = f(i * h);
  return v;
}

} // namespace

TEST_CASE("stencil coefficients") {
  const std::array<double, 7> d5{-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5};
  const std::array<double, 7> d3{0.0, -0.5, 1.0, 0.0, -1.0, 0.5, 0.0};
  const std::array<double, 7> d1{0.0, 0.0, -0.5, 0.0, 0.5, 0.0, 0.0};
  CHECK(central_stencil(5) == d5);
  CHECK(central_stencil(3) == d3);
  CHECK(central_stencil(1) == d1);
}

TEST_CASE("central differences are exact one degree beyond their order") {
  const int nx = 41;
  const double h = 0.1;
  for (int k : {1, 3, 5}) {
    for (int n = 0; n <= k + 1; ++n) {
      const Eigen::VectorXd u = sample(nx, h, [n](double x) { return std::pow(x - 1.3, n); });
      const Eigen::VectorXd d = dx_central(u, h, k);
      double fall = 1.0;
      for (int m = 0; m < k; ++m) fall *= (n - m);
      for (int i = 3; i < nx - 3; ++i) {
        INFO("k=" << k << " n=" << n << " i=" << i);
        const double ref = n >= k ? fall * std::pow(i * h - 1.3, n - k) : 0.0;
        CHECK(std::abs(d(i) - ref) < 1e-6 * (1.0 + std::abs(ref)));
      }
    }
  }
}

TEST_CASE("ghost closure reproduces the boundary polynomials") {
  const int nx = 30;
  const double h = 0.2, X = h * (nx - 1);
  auto left = [](double x) { return 1.5 * x * x - 0.7 * x * x * x + 0.2 * x * x * x * x; };
  Eigen::VectorXd u = sample(nx, h, left);
  u(nx - 1) = 0.0;
  Eigen::VectorXd e = extend_with_ghosts(u);
  for (int k = 1; k <= 3; ++k) CHECK(e(kGhosts - k) == doctest::Approx(left(-k * h)).epsilon(1e-12));

  auto right = [X](double x) { return std::pow(X - x, 3); };
  Eigen::VectorXd r = sample(nx, h, right);
  r(0) = 0.0;
  e = extend_with_ghosts(r);
  for (int k = 1; k <= 3; ++k) CHECK(e(kGhosts + nx - 1 + k) == doctest::Approx(right(X + k * h)).epsilon(1e-12));
  CHECK(Closure::right(2) == -8.0);
}

TEST_CASE("boundary trace mu2") {
  const double h = 0.05;
  const Eigen::VectorXd u = sample(50, h, [](double x) { return x * x; });
  CHECK(mu2_trace(u, h) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mu2_trace(Eigen::VectorXd::Zero(50), h) == 0.0);
}

TEST_CASE("Fornberg weights") {
  Eigen::VectorXd nodes(3);
  nodes << -1.0, 0.0, 1.0;
  const Eigen::MatrixXd w = fornberg_weights(0.0, nodes, 2);
  CHECK(w(0, 2) == doctest::Approx(1.0));
  CHECK(w(1, 2) == doctest::Approx(-2.0));
  CHECK(w(2, 2) == doctest::Approx(1.0));
  CHECK(w(0, 1) == doctest::Approx(-0.5));
  CHECK(w(2, 1) == doctest::Approx(0.5));
  CHECK(w(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("band matrix multiply and LU solve") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 25;
  BandMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 3); j <= std::min(n - 1, i + 3); ++j) m.at(i, j) = u(rng) + (i == j ? 8.0 : 0.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  CHECK((m.multiply(x) - m.dense() * x).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::VectorXd b = m.multiply(x);
  BandLU lu(m);
  lu.solve(b);
  CHECK((b - x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(m.in_band(0, 4));
  CHECK(m.in_band(4, 1));
}

TEST_CASE("mode operator converges at second order on a windowed wave") {
  const GaussWave w{8.0, 1.0, 2.0};
  const double b = 0.7, lambda = 2.3;
  auto exact = [&](double x) {
    return -w.deriv(x, 5) + w.deriv(x, 3) + (b - lambda) * w.deriv(x, 1);
  };
  std::vector<double> errs;
  for (int nx : {321, 641, 1281}) {
    const double h = 16.0 / (nx - 1);
    const Eigen::VectorXd u = sample(nx, h, [&](double x) { return w.deriv(x, 0); });
    const auto a = assemble_mode_operator(nx, h, b, lambda);
    const Eigen::VectorXd au = apply_mode_operator(a, u);
    double e = 0, s = 0;
    for (int i = 1; i < nx - 1; ++i) {
      e = std::max(e, std::abs(au(i) - exact(i * h)));
      s = std::max(s, std::abs(exact(i * h)));
    }
    errs.push_back(e / s);
  }
  CHECK(errs[0] < 5e-2);
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("first-derivative term cancels when lambda equals b") {
  const auto a = assemble_mode_operator(60, 0.1, 2.5, 2.5).dense();
  const auto z = assemble_mode_operator(60, 0.1, 0.0, 0.0).dense();
  CHECK((a - z).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("the discrete operator has no growing modes") {
  for (double lambda : {0.0, 9.8696, 100.0}) {
    const Eigen::MatrixXd a = assemble_mode_operator(201, 0.05, 0.0, lambda).dense();
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    const double lo = es.eigenvalues().real().minCoeff();
    INFO("lambda=" << lambda << " min Re " << lo);
    CHECK(lo > -1e-8 * es.eigenvalues().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("operator rejects grids too small for the stencil") {
  CHECK_THROWS(assemble_mode_operator(6, 0.1, 0.0, 0.0));
}

TEST_CASE("cut-off function") {
  CHECK(eta(-1.0) == 0.0);
  CHECK(eta(0.0) == 0.0);
  CHECK(eta(1.0) == 1.0);
  CHECK(eta(3.0) == 1.0);
  double prev = 0.0;
  for (double x = -0.5; x <= 1.5; x += 0.01) {
    CHECK(eta(x) + eta(1 - x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eta(x) >= prev);
    prev = eta(x);
  }
}

TEST_CASE("nonlinearities") {
  const auto q = Nonlinearity::quadratic();
  CHECK(q.g(0.0) == 0.0);
  CHECK(q.gprime(0.3) == 0.3);
  CHECK(q.gstar(0.6) == doctest::Approx(0.6 * 0.6 * 0.6 / 6).epsilon(1e-14));
  CHECK(q.gprime_u_star(0.6) == doctest::Approx(0.6 * 0.6 * 0.6 / 3).epsilon(1e-14));
  CHECK(q.p() == 1.0);

  const auto c = Nonlinearity::cubic(2.0);
  CHECK(c.gprime(0.5) == doctest::Approx(0.5));
  CHECK(c.gstar(1.0) == doctest::Approx(2.0 / 12.0));
  CHECK(c.p() == 2.0);

  const auto pl = Nonlinearity::power_law(1.5, -1.0);
  for (double u : {-2.0, -0.3, 0.0, 0.4, 3.0}) CHECK(std::abs(pl.gprime(u)) <= std::pow(std::abs(u), 1.5) + 1e-15);
  CHECK(pl.g(0.0) == 0.0);

  const auto h = Nonlinearity::quadratic(1.0);
  CHECK(h.gprime(3.0) == 0.0);
  CHECK(h.gprime(-2.0) == 0.0);
  CHECK(h.gprime(0.8) == 0.8);
  CHECK(h.gprime(1.0) == 1.0);

  const auto hc = Nonlinearity::cubic(1.0, 0.5);
  for (double u : {0.3, 1.7, 2.5}) {
    const double ref = 1.0 / 12.0 * std::pow(u, 4);
    if (u <= 2.0) CHECK(hc.gstar(u) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK(Nonlinearity::none().is_zero());
  CHECK(Nonlinearity::none().gprime(5.0) == 0.0);
}
