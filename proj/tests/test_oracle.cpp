#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kzk/oracle.hpp"
#include "kzk/periodic.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kzk;
using std::numbers::pi;

namespace {

double centroid(const LinearOracle& o, const Eigen::MatrixXd& c) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < o.nx(); ++i) {
    const double m = c.row(i).squaredNorm();
    num += o.x(i) * m;
    den += m;
  }
  return num / den;
}

} // namespace

TEST_CASE("dispersion relation") {
  CHECK(dispersion(0.0, 7.0, 3.0) == 0.0);
  CHECK(dispersion(1.0, 0.0, 0.0) == 2.0);
  CHECK(dispersion(2.0, 1.0, 1.0) == 40.0);
  CHECK(dispersion(-2.0, 1.0, 1.0) == -40.0);
}

TEST_CASE("Gauss-Legendre rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(8, 0.0, 2.0, x, w);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += w(k) * std::pow(x(k), 15);
  CHECK(s == doctest::Approx(std::pow(2.0, 16) / 16.0).epsilon(1e-12));
}

TEST_CASE("evolution is the identity at t = 0") {
  const LinearOracle o(build_basis(BCFamily::A_DirichletDirichlet, 1.0, 4), 40.0, 256, 0.5);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  Eigen::MatrixXd u0(256, 4);
  for (int i = 0; i < u0.size(); ++i) u0.data()[i] = n(rng);
  CHECK(o.evolve(u0, 0.0).coeff == u0);
  CHECK_THROWS(o.evolve(u0, -1.0));
  CHECK_THROWS(o.evolve(Eigen::MatrixXd::Zero(100, 4), 1.0));
}

TEST_CASE("norm conservation and composition") {
  const LinearOracle o(build_basis(BCFamily::A_DirichletDirichlet, 1.0, 4), 60.0, 1200, 0.0);
  const Eigen::MatrixXd u0 = o.project([](double x, double y) {
    return std::exp(-std::pow(x - 30.0, 2) / 18.0) * std::sin(pi * y) + 0.2 * std::exp(-std::pow(x - 28.0, 2) / 8.0) * std::sin(2 * pi * y);
  });
  const double n0 = o.norm2(u0);
  const auto r = o.evolve(u0, 0.1);
  CHECK(std::abs(o.norm2(r.coeff) / n0 - 1.0) < 1e-12);
  CHECK(r.tail_ok);

  const auto a = o.evolve(o.evolve(u0, 0.03).coeff, 0.07);
  CHECK((a.coeff - r.coeff).cwiseAbs().maxCoeff() < 1e-12 * u0.cwiseAbs().maxCoeff());

  const LinearOracle ob(build_basis(BCFamily::C_DirichletNeumann, 2.0, 3), 40.0, 400, 1.3);
  const Eigen::MatrixXd v0 = ob.project([](double x, double y) { return std::exp(-std::pow(x - 20.0, 2) / 8.0) * std::sin(pi * y / 4); });
  CHECK(std::abs(ob.norm2(ob.evolve(v0, 0.5).coeff) / ob.norm2(v0) - 1.0) < 1e-12);
}

TEST_CASE("single mode keeps its norm and shifts its phase") {
  const auto basis = build_basis(BCFamily::A_DirichletDirichlet, 1.0, 2);
  const LinearOracle o(basis, 20.0, 200, 0.0);
  const double xi = o.xi(3);
  const Eigen::MatrixXd u0 = o.project([&](double x, double y) { return std::cos(xi * x) * basis.eval(0, y, 0); });
  const double t = 0.37;
  const double w = dispersion(xi, basis.lambda(0), 0.0);
  const Eigen::MatrixXd u = o.evolve(u0, t).coeff;
  for (int i = 0; i < o.nx(); i += 7) CHECK(u(i, 0) == doctest::Approx(std::cos(xi * o.x(i) + w * t)).epsilon(1e-12).scale(1.0));
  CHECK(o.norm2(u) == doctest::Approx(o.norm2(u0)).epsilon(1e-12));
}

TEST_CASE("Duhamel quadrature matches the closed form for steady forcing") {
  const auto basis = build_basis(BCFamily::A_DirichletDirichlet, 1.0, 2);
  const LinearOracle o(basis, 20.0, 200, 0.4);
  const double t = 0.8;
  SUBCASE("oscillating mode") {
    const double xi = o.xi(2);
    const double w = dispersion(xi, basis.lambda(1), 0.4);
    const Forcing f = [&](double, double x, double y) { return std::cos(xi * x) * basis.eval(1, y, 0); };
    const auto r = o.evolve(Eigen::MatrixXd::Zero(200, 2), t, f, 32);
    for (int i = 0; i < o.nx(); i += 5) {
      const double ref = (std::sin(xi * o.x(i) + w * t) - std::sin(xi * o.x(i))) / w;
      CHECK(std::abs(r.coeff(i, 1) - ref) < 1e-10);
      CHECK(std::abs(r.coeff(i, 0)) < 1e-12);
    }
  }
  SUBCASE("zero frequency") {
    const Forcing f = [&](double, double, double y) { return basis.eval(0, y, 0); };
    const auto r = o.evolve(Eigen::MatrixXd::Zero(200, 2), t, f, 32);
    for (int i = 0; i < o.nx(); i += 5) CHECK(r.coeff(i, 0) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("wave packets travel at the group velocity") {
  const auto basis = build_basis(BCFamily::A_DirichletDirichlet, 1.0, 2);
  const LinearOracle o(basis, 200.0, 4096, 0.5);
  const double xi0 = 1.0;
  const Eigen::MatrixXd u0 = o.project([&](double x, double y) {
    return std::exp(-std::pow(x - 100.0, 2) / 200.0) * std::cos(xi0 * x) * basis.eval(0, y, 0);
  });
  const double t = 0.3;
  const double speed = 5 * std::pow(xi0, 4) + 3 * xi0 * xi0 + basis.lambda(0) - 0.5;
  const double moved = centroid(o, u0) - centroid(o, o.evolve(u0, t).coeff);
  CHECK(moved / t == doctest::Approx(speed).epsilon(0.05));
}

TEST_CASE("tail monitor") {
  const LinearOracle o(build_basis(BCFamily::A_DirichletDirichlet, 1.0, 2), 40.0, 400, 0.0);
  const Eigen::MatrixXd edge = o.project([](double x, double y) { return std::exp(-std::pow(x - 1.0, 2)) * std::sin(pi * y); });
  const auto r = o.evolve(edge, 0.1);
  CHECK(r.tail_fraction > 1e-3);
  CHECK_FALSE(r.tail_ok);
  CHECK(o.tail_fraction(Eigen::MatrixXd::Zero(400, 2)) == 0.0);
}

TEST_CASE("periodic solver") {
  const auto basis = build_basis(BCFamily::A_DirichletDirichlet, 1.0, 8);
  SUBCASE("linear runs keep both invariants") {
    PeriodicSolver ps(basis, 30.0, 256, 0.5, Nonlinearity::none(), 1e-3);
    ps.set_state(ps.project([](double x, double y) { return 0.1 * std::exp(-std::pow(x - 15.0, 2) / 2.0) * std::sin(pi * y); }));
    const double m0 = ps.mass(), h0 = ps.hamiltonian();
    for (int k = 0; k < 1000; ++k) ps.step();
    CHECK(ps.time() == doctest::Approx(1.0));
    CHECK(std::abs(ps.mass() / m0 - 1.0) <= 1e-10);
    CHECK(std::abs(ps.hamiltonian() / h0 - 1.0) <= 1e-10);
  }
  SUBCASE("zero stays zero") {
    PeriodicSolver ps(basis, 30.0, 256, 0.0, Nonlinearity::quadratic(), 1e-3);
    ps.set_state(Eigen::MatrixXd::Zero(256, basis.count()));
    for (int k = 0; k < 20; ++k) ps.step();
    CHECK(ps.state().cwiseAbs().maxCoeff() == 0.0);
    CHECK(ps.mass() == 0.0);
  }
  SUBCASE("quadratic runs drift little") {
    PeriodicSolver ps(basis, 30.0, 256, 0.0, Nonlinearity::quadratic(), 1e-3);
    ps.set_state(ps.project([](double x, double y) { return 0.1 * std::exp(-std::pow(x - 15.0, 2) / 2.0) * std::sin(pi * y); }));
    const double m0 = ps.mass(), h0 = ps.hamiltonian();
    for (int k = 0; k < 500; ++k) ps.step();
    CHECK(std::abs(ps.mass() / m0 - 1.0) <= 1e-4);
    CHECK(std::abs(ps.hamiltonian() / h0 - 1.0) <= 1e-3);
  }
}
