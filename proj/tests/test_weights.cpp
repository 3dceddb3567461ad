#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kzk/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace kzk;
using std::numbers::pi;

namespace {

std::vector<WeightSpec> all_kinds() {
  return {WeightSpec::exponential(0.1), WeightSpec::exponential(1.0), WeightSpec::power(1.3),
          WeightSpec::power(0.5), WeightSpec::rho0(), WeightSpec::rho0_shifted(2.0), WeightSpec::unit()};
}

} // namespace

TEST_CASE("closed-form values") {
  CHECK(WeightSpec::exponential(0.5).eval(0.0) == 1.0);
  CHECK(WeightSpec::rho0().eval(0.0) == 1.0);
  CHECK(WeightSpec::power(1.0).eval(1.0, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(WeightSpec::exponential(0.25).eval(2.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(WeightSpec::power(1.0).eval(2.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(WeightSpec::rho0().eval(1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(WeightSpec::unit().eval(7.0, 0) == 1.0);
  CHECK(WeightSpec::unit().eval(7.0, 3) == 0.0);
}

TEST_CASE("power derivative matches central difference of the value") {
  const auto w = WeightSpec::power(1.0);
  const double h = 1e-4;
  const double fd = (w.eval(1.0 + h) - w.eval(1.0 - h)) / (2 * h);
  CHECK(fd == doctest::Approx(w.eval(1.0, 1)).epsilon(1e-8));
}

TEST_CASE("eval rejects negative x and order above five") {
  CHECK_THROWS_AS(WeightSpec::exponential(0.1).eval(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(WeightSpec::rho0().eval(1.0, 6), std::invalid_argument);
}

TEST_CASE("every derivative order agrees with a central difference of the one below") {
  const double h = 1e-4;
  for (const auto& w : all_kinds())
    for (double x : {0.3, 1.7, 4.0, 11.0})
      for (int j = 0; j <= 4; ++j) {
        const double fd = (w.eval(x + h, j) - w.eval(x - h, j)) / (2 * h);
        const double exact = w.eval(x, j + 1);
        const double scale = std::abs(w.eval(x, j)) + std::abs(w.eval(x, j + 2 <= 5 ? j + 2 : 5));
        INFO(w.label() << " x=" << x << " j=" << j);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact) + 1e-9 * scale);
      }
}

TEST_CASE("one-sided difference at the origin") {
  const double h = 1e-4;
  for (const auto& w : all_kinds())
    for (int j = 0; j <= 4; ++j) {
      const double fd = (-3 * w.eval(0.0, j) + 4 * w.eval(h, j) - w.eval(2 * h, j)) / (2 * h);
      const double exact = w.eval(0.0, j + 1);
      const double scale = std::abs(w.eval(0.0, j)) + std::abs(w.eval(0.0, j + 2 <= 5 ? j + 2 : 5));
      INFO(w.label() << " j=" << j);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact) + 1e-7 * scale);
    }
}

TEST_CASE("derivative weights") {
  const auto e = derivative_weight(WeightSpec::exponential(0.5));
  for (double x : {0.0, 1.0, 3.5}) CHECK(e.eval(x) == doctest::Approx(std::exp(x)).epsilon(1e-14));

  const auto r = derivative_weight(WeightSpec::rho0());
  for (double x : {0.0, 0.5, 2.0, 10.0}) CHECK(r.eval(x) == doctest::Approx((2 / pi) / (1 + x * x)).epsilon(1e-14));

  const auto p = derivative_weight(WeightSpec::power(1.0));
  for (double x : {0.0, 1.0, 4.0}) CHECK(p.eval(x) == doctest::Approx(2 * (1 + x)).epsilon(1e-14));

  for (const auto& w : {WeightSpec::exponential(0.3), WeightSpec::power(1.5), WeightSpec::rho0()}) {
    const auto d = derivative_weight(w);
    for (double x : {0.0, 0.7, 5.0})
      for (int j = 0; j <= 4; ++j) CHECK(d.eval(x, j) == w.eval_any(x, j + 1));
  }

  CHECK_THROWS_AS(derivative_weight(WeightSpec::unit()), std::invalid_argument);
  CHECK_THROWS_AS(derivative_weight(WeightSpec::power(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(derivative_weight(WeightSpec::power(0.3)), std::invalid_argument);
}

TEST_CASE("admissibility constants") {
  const auto e = check_admissibility(WeightSpec::exponential(0.5));
  CHECK(e.pass);
  CHECK(e.c[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.c_shift == doctest::Approx(std::exp(1.0)).epsilon(1e-12));

  const auto u = check_admissibility(WeightSpec::unit());
  CHECK(u.pass);
  for (double c : u.c) CHECK(c == 0.0);
  CHECK(u.c_shift == 1.0);

  const auto r = check_admissibility(WeightSpec::rho0(), 50.0);
  CHECK(r.pass);
  CHECK(r.c[0] == doctest::Approx(2 / pi).epsilon(1e-9));

  for (double a : {0.1, 0.5, 1.0}) CHECK(check_admissibility(WeightSpec::exponential(a)).pass);
  for (double a : {0.5, 1.0, 2.0}) CHECK(check_admissibility(WeightSpec::power(a)).pass);
}

TEST_CASE("reported constants dominate the sampled ratios") {
  for (const auto& w : all_kinds()) {
    const auto rep = check_admissibility(w);
    for (double x = 0.0; x <= 50.0; x += 0.37) {
      for (int j = 1; j <= 5; ++j) CHECK(std::abs(w.eval(x, j)) <= rep.c[j - 1] * w.eval(x) * (1 + 1e-9) + 1e-300);
      for (double d : {0.25, 0.5, 0.99})
        if (x + d <= 50.0) CHECK(w.eval(x) <= rep.c_shift * w.eval(x + d) * (1 + 1e-12));
    }
  }
}

TEST_CASE("a low cap flags a fast exponential") {
  CHECK_FALSE(check_admissibility(WeightSpec::exponential(1.0), 50.0, 10000, 10.0).pass);
}

TEST_CASE("uniqueness and growth hypotheses") {
  const auto e = check_theorem_hypotheses(WeightSpec::exponential(1.0), 1.0, 1.0);
  CHECK(e.weak_uniqueness_ok);
  CHECK(e.weak_c0 == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(e.growth_ok);
  CHECK(e.growth_n == 0);

  const auto p58 = check_theorem_hypotheses(WeightSpec::power(5.0 / 8.0), 1.0, 1.0);
  CHECK(p58.weak_uniqueness_ok);
  CHECK(p58.weak_c0 > 0.0);

  const auto p14 = check_theorem_hypotheses(WeightSpec::power(0.25), 2.0, 1.0);
  CHECK_FALSE(p14.weak_uniqueness_ok);

  const auto pw = check_theorem_hypotheses(WeightSpec::power(1.0), 1.0, 1.0);
  CHECK(pw.growth_ok);
  CHECK(pw.growth_n == 1);

  CHECK_FALSE(check_theorem_hypotheses(WeightSpec::unit(), 1.0, 1.0).weak_uniqueness_ok);
}
