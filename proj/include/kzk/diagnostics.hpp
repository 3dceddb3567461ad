#pragma once

#include "kzk/eigenbasis.hpp"
#include "kzk/field.hpp"
#include "kzk/nonlinearity.hpp"
#include "kzk/weights.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace kzk {

using Forcing = std::function<double(double t, double x, double y)>;

/// Trapezoid weights in x for the grid (half weights at both ends).
Eigen::VectorXd x_trapezoid(const Grid& grid);

/// int int u^2 dx dy
double mass(const Field& u);

struct WeightedMassResult {
  double value = 0.0;
  bool reliable = true;  ///< false when the last 5% of x carries >1e-6 of the total or overflow
};

WeightedMassResult weighted_mass_checked(const Field& u, const WeightSpec& w);
double weighted_mass(const Field& u, const WeightSpec& w);

/// int int (u_xx^2 + u_x^2 + u_y^2 - 2 g*(u)) dx dy
double h1_energy(const Field& u, const Nonlinearity& nl);

/// int int (u_xx^2 + u_x^2 + u_y^2 + u^2) psi dx dy
double strong_weighted_norm(const Field& u, const WeightSpec& w);

/// mu2(y_j) = u_xx(0, y_j) at the y nodes.
Eigen::VectorXd boundary_trace_mu2(const Field& u);

/// int_0^L mu2^2 dy
double mu2_norm(const Field& u);

enum class LambdaField { Uxx, Uy, Uxxxx, Uyy };
std::string lambda_field_name(LambdaField f);
LambdaField parse_lambda_field(const std::string& name);

/// Running sup over unit x-windows [x_i, x_i + 1] of the time-integrated
/// local mass of the selected derivative field.
struct LambdaPlusAccumulator {
  LambdaPlusAccumulator(const Grid& grid, LambdaField field);

  LambdaField field;
  Eigen::VectorXd windows;  ///< accumulated mass per window start
  double value() const { return windows.size() ? windows.maxCoeff() : 0.0; }
};

void lambda_plus_update(LambdaPlusAccumulator& acc, const Field& u, double dt);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  std::vector<double> weighted_mass;
  std::vector<double> weighted_strong;
  double h1_energy = 0.0;
  double mu2_norm = 0.0;
  std::vector<double> lambda_plus;
};

/// Terms of the weighted identity at one sample. lhs collects the time
/// derivative and every dissipation/boundary term; rhs the forcing and
/// nonlinear sources.
struct IdentitySample {
  double t = 0.0;
  double dmass_dt = 0.0;
  double d1_term = 0.0;   ///< int int (5u_xx^2 + 3u_x^2 + u_y^2 - b u^2) psi'
  double d3_term = 0.0;   ///< -int int (5u_x^2 + u^2) psi'''
  double d5_term = 0.0;   ///< int int u^2 psi^(5)
  double boundary = 0.0;  ///< psi(0) int mu2^2
  double forcing = 0.0;   ///< 2 int int f u psi
  double nonlinear = 0.0; ///< 2 int int (g'(u)u)* psi'
  double residual = 0.0;  ///< lhs - rhs
  double largest = 0.0;   ///< max |term|
};

struct IdentityResidual {
  std::vector<IdentitySample> samples;
  double max_relative = 0.0;      ///< max |residual| / largest over samples
  double max_abs = 0.0;
  bool cadence_too_coarse = false;
};

/// Evaluates the weighted energy identity along uniformly spaced snapshots.
/// The time derivative is a central difference; the coarse-cadence flag is
/// raised when doubling the stride changes the residual by more than 2x.
IdentityResidual energy_identity_residual(const std::vector<double>& times,
                                          const std::vector<Field>& snapshots, const WeightSpec& w,
                                          const Nonlinearity& nl, double b,
                                          const Forcing& forcing = {});

struct DecayConstants {
  double b = 0.0;
  double L = 0.0;
  double kappa = 0.0;
  double p = 0.0;
  double L0 = std::numeric_limits<double>::infinity();
  double alpha0 = 0.0;
  double beta = 0.0;
  double eps0 = std::numeric_limits<double>::quiet_NaN();  ///< calibrated externally
  bool admissible = true;  ///< false when b > 0 and L >= L0
};

DecayConstants decay_constants(double b, double L, BCFamily family, double p);

struct DecayFit {
  double rate = 0.0;
  double stderr_rate = 0.0;
  int used = 0;
  bool truncated = false;  ///< non-positive or underflowed samples were dropped
};

constexpr double kFitUnderflow = 1e-280;

/// Least-squares slope of log(m) on [t_start, T]; rate = -slope. Samples at
/// or below `floor` are dropped and flag the fit as truncated.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& m, double t_start,
                   double floor = kFitUnderflow);

} // namespace kzk
