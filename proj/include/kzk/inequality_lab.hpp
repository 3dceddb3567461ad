#pragma once

#include "kzk/eigenbasis.hpp"
#include "kzk/weights.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace kzk {

/// s(m, q) = (2m + 3)/8 - 3/(4q); q = +inf allowed. Valid for m = 0 with
/// q in [2, inf] and m = 1 with q in [2, 6].
double interpolation_exponent(int m, double q);

/// One-dimensional profile atom with closed-form derivatives up to order 2.
struct Atom {
  enum class Kind { Gauss, Exp, Trig };
  Kind kind;
  double amp;
  double a;  ///< Gauss: center, Exp: rate, Trig: angular frequency
  double b;  ///< Gauss: width, Trig: phase
  double eval(double x, int order) const;
};

/// phi(x, y) = sum_t coeff_t X_t(x) Y_t(y) where X_t is a sum of atoms and
/// Y_t is either eigenfunction `mode` of the ensemble basis or a y-atom.
struct TestFunction {
  struct Term {
    double coeff = 1.0;
    std::vector<Atom> x;
    int mode = -1;            ///< basis mode index, or -1 to use y_atoms
    std::vector<Atom> y_atoms;
  };
  std::shared_ptr<const EigenBasis> basis;
  std::vector<Term> terms;

  double eval(double x, double y, int kx = 0, int ky = 0) const;
};

struct EnsembleSpec {
  int size = 200;
  std::uint64_t seed = 42;
  double X_max = 30.0;
  int nx = 1201;
  int ny = 65;
  BCFamily family = BCFamily::A_DirichletDirichlet;
  double L = 1.0;
  int y_modes = 3;
  int bumps = 2;
  bool vanish_at_zero = true;
};

struct Ensemble {
  EnsembleSpec spec;
  std::vector<TestFunction> members;
};

/// Random y eigen-expansions times x-profiles (Gaussians plus a decaying
/// exponential); with vanish_at_zero each profile p is replaced by
/// p(x) - p(0) e^{-gamma x}.
Ensemble make_ensemble(const EnsembleSpec& spec);

/// Same members sampled on a grid refined by `factor` in both directions.
Ensemble refine(const Ensemble& e, int factor);

/// Values of phi and its derivatives on the uniform sampling grid.
struct Sampled {
  Eigen::VectorXd x, y, wx, wy;  ///< nodes and trapezoid weights
  Eigen::MatrixXd phi, phi_x, phi_xx, phi_y;
};

Sampled sample(const TestFunction& f, double X_max, int nx, double L, int ny, double x0 = 0.0);

struct Lemma21Report {
  int m = 0;
  double q = 2.0;
  double s = 0.0;
  double max_ratio = 0.0;
  std::vector<double> ratios;
  bool finite = true;
};

/// Ratio LHS/RHS per member; phi == 0 counts as ratio 0. `scale` multiplies
/// every member (homogeneity checks).
Lemma21Report check_lemma21(int m, double q, const WeightSpec& psi1, const WeightSpec& psi2,
                            const Ensemble& ens, double scale = 1.0);

struct Lemma22Report {
  double c_mass = 0.0;     ///< max of lhs / (gm + mass)
  double c_mass_gm = 0.0;  ///< max of lhs / gm
  double c_grad = 0.0;
  double c_grad_gm = 0.0;
  std::vector<double> ratios_mass;
  std::vector<double> ratios_grad;
  bool finite = true;
};

Lemma22Report check_lemma22(const WeightSpec& psi, const Ensemble& ens);

struct AnisotropicReport {
  double c_box = 0.0;  ///< sup over members of ||f||_inf / (H^{3/8} M^{1/8}) on the unit box
  double c_strip = 0.0;  ///< sup of ||phi_x||_6 / H^{1/2} over the half-strip ensemble
  std::vector<double> ratios_box;
  std::vector<double> ratios_strip;
  bool finite = true;
};

/// Box members for the L_inf bound on Q = (0,1) x (0,L).
Ensemble make_box_ensemble(const EnsembleSpec& spec);

AnisotropicReport check_base_anisotropic(const Ensemble& box, const Ensemble& strip);

/// One CSV-ready line of the inequality report.
struct InequalityRow {
  std::string lemma;
  std::string params;
  double constant = 0.0;
  bool pass = false;
};

} // namespace kzk
