#pragma once

#include "kzk/diagnostics.hpp"
#include "kzk/field.hpp"
#include "kzk/linear_operator.hpp"
#include "kzk/nonlinearity.hpp"
#include "kzk/weights.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzk {

class BlowUpError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  bool sponge = false;
  double sponge_strength = 20.0;  ///< damping rate reached at X_max
  bool dealias = true;
};

/// IMEX integrator: Crank-Nicolson on A_l per y-mode, Adams-Bashforth 2 on
/// N(u) = -g'(u) u_x (explicit midpoint for the first step), forcing sampled
/// at the step midpoint.
class Solver {
public:
  Solver(GridPtr grid, double b, Nonlinearity nl, Forcing forcing = {}, SolverOptions options = {});

  /// Advances u from t to t + dt in place. Throws BlowUpError on NaN/Inf.
  void step(Field& u, double t);

  /// Forgets the Adams-Bashforth history (next step restarts with midpoint).
  void reset() { prev_nl_.reset(); }

  /// y-spectral coefficients of -g'(u) u_x with dealiasing; zero rows at the ends.
  Eigen::MatrixXd nonlinear_rhs(const Field& u) const;
  /// y-spectral coefficients of f(t, ., .) on interior rows.
  Eigen::MatrixXd forcing_rhs(double t) const;

  const std::vector<BandMatrix>& operators() const { return ops_; }
  const Grid& grid() const { return *grid_; }
  double dt() const { return dt_; }
  bool is_linear_unforced() const { return nl_.is_zero() && !forcing_; }

private:
  struct CnFactors {
    std::vector<BandLU> implicit;
    double dt;
  };

  void cn_solve(Eigen::MatrixXd& c, const CnFactors& f, const Eigen::MatrixXd* source) const;
  const CnFactors& half_factors();
  void apply_sponge(Eigen::MatrixXd& c) const;

  GridPtr grid_;
  double b_;
  Nonlinearity nl_;
  Forcing forcing_;
  SolverOptions opt_;
  double dt_;
  std::vector<BandMatrix> ops_;
  CnFactors full_;
  std::optional<CnFactors> half_;
  std::optional<Eigen::MatrixXd> prev_nl_;
  int keep_modes_;
};

struct RunSpec {
  GridPtr grid;
  double b = 0.0;
  Nonlinearity nl = Nonlinearity::none();
  Forcing forcing;
  SolverOptions options;
  Field u0;
  /// Data and forcing truncation u0 eta(1/h - x) when > 0.
  double truncation_h = 0.0;
  int record_every = 1;
  bool keep_snapshots = false;
  std::vector<WeightSpec> weights;
  std::vector<WeightSpec> strong_weights;
  std::vector<LambdaField> lambda_plus;
  bool track_h1 = true;
  std::function<void(const DiagnosticsRecord&)> on_record;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  Field final_state;
  double t_final = 0.0;
  bool blew_up = false;
  std::string message;
};

/// Integrates from t = 0 to grid.T, emitting a record every record_every
/// steps (and always at t = 0 and at the final time).
Trajectory run(const RunSpec& spec);

DiagnosticsRecord make_record(double t, const Field& u, const RunSpec& spec,
                              const std::vector<LambdaPlusAccumulator>& acc);

struct CompatibilityReport {
  std::vector<double> trace;     ///< max_y |Phi_j(0, y)|, j = 0..j_max
  std::vector<double> trace_x;   ///< max_y |d/dx Phi_j(0, y)|
  std::vector<double> interior;  ///< max |Phi_j| over the grid
  bool resolution_warning = false;
};

/// Recursively builds Phi_0 = u0, Phi_j = d_t^{j-1} f(0) + (d5 - d3 + (lambda - b) d1) Phi_{j-1}
/// with 11-point finite differences (one-sided near x = 0) and reports traces.
CompatibilityReport compatibility_check(const Field& u0, const Forcing& forcing, int j_max, double b);

} // namespace kzk
