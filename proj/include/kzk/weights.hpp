#pragma once

#include <array>
#include <string>

namespace kzk {

enum class WeightKind { Exponential, Power, ArctanRho0, ArctanRho0Shifted, Unit };

/// Admissible weight psi(x) on x >= 0 in closed form.
///
/// Exponential(alpha) is e^{2 alpha x}, Power(alpha) is (1+x)^{2 alpha},
/// ArctanRho0 is 1 + (2/pi) arctan x and the shifted variant evaluates
/// rho0(x - x0). A weight built by derivative_weight() carries a non-zero
/// `shift` and evaluates the shift-th derivative of its base.
class WeightSpec {
public:
  static WeightSpec exponential(double alpha);
  static WeightSpec power(double alpha);
  static WeightSpec rho0();
  static WeightSpec rho0_shifted(double x0);
  static WeightSpec unit();

  /// Parses the configuration names "exp", "pow", "rho0", "unit".
  static WeightSpec from_name(const std::string& name, double alpha, double x0 = 0.0);

  WeightKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double x0() const { return x0_; }
  int shift() const { return shift_; }

  /// Short label such as "exp(0.1)" or "d1:rho0".
  std::string label() const;

  /// psi^{(order)}(x); throws std::invalid_argument for x < 0 or order outside 0..5.
  double eval(double x, int order = 0) const;
  double operator()(double x) const { return eval(x, 0); }

  /// Same evaluation without the order cap; used by derived weights.
  double eval_any(double x, int order) const;

private:
  WeightSpec(WeightKind kind, double alpha, double x0, int shift)
      : kind_(kind), alpha_(alpha), x0_(x0), shift_(shift) {}

  WeightKind kind_;
  double alpha_;
  double x0_;
  int shift_;

  friend WeightSpec derivative_weight(const WeightSpec& w);
};

/// Returns the weight psi'. Rejects Unit, Power with 2 alpha - 1 <= 0 and
/// any rho0 weight that is already a derivative (its derivative changes sign).
WeightSpec derivative_weight(const WeightSpec& w);

struct AdmissibilityReport {
  std::array<double, 5> c{};   ///< c(j) = max |psi^(j)| / psi for j = 1..5
  double c_shift = 1.0;        ///< max psi(x1)/psi(x2) over |x1 - x2| <= 1
  bool pass = false;
};

constexpr double kDefaultAdmissibilityCap = 1e6;

AdmissibilityReport check_admissibility(const WeightSpec& w, double x_max = 50.0,
                                        int n_samples = 10000,
                                        double cap = kDefaultAdmissibilityCap);

struct HypothesisReport {
  double weak_c0 = 0.0;     ///< inf of (psi')^{2+3p} psi^{p-2}
  bool weak_uniqueness_ok = false;
  double strong_c0 = 0.0;   ///< inf of psi' psi^{4q+3}
  bool strong_uniqueness_ok = false;
  int growth_n = -1;        ///< smallest n with psi <= c (1+x)^n psi', -1 if none up to 4
  double growth_c = 0.0;
  bool growth_ok = false;
};

/// Samples the uniqueness conditions and the growth condition on [0, x_max].
/// A condition passes when its infimum is positive and the sampled function
/// does not decay along the tail of the grid.
HypothesisReport check_theorem_hypotheses(const WeightSpec& w, double p, double q,
                                          double x_max = 50.0, int n_samples = 10000);

} // namespace kzk
