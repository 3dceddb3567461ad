#pragma once

#include "kzk/eigenbasis.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>

namespace kzk {

/// Truncated half-strip [0, X_max] x [0, L] with nx uniform x nodes.
struct Grid {
  Grid(double X_max, int nx, EigenBasis basis, double dt = 1e-3, double T = 0.0);

  double X_max;
  int nx;
  EigenBasis basis;
  double dt;
  double T;

  double dx() const { return X_max / (nx - 1); }
  double x(int i) const { return i * dx(); }
  int modes() const { return basis.count(); }
  int ny() const { return basis.n_nodes(); }
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double X_max, int nx, BCFamily family, double L, int ny_modes, double dt = 1e-3,
                  double T = 0.0);

/// Real field on the grid, stored y-spectrally: coeff(i, l) is the l-th
/// eigen-coefficient at x_i. Physical samples are synthesized on demand.
class Field {
public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, Eigen::MatrixXd coeff);

  static Field from_physical(GridPtr grid, const Eigen::MatrixXd& values);
  static Field from_function(GridPtr grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Eigen::MatrixXd& coeff() { return coeff_; }
  const Eigen::MatrixXd& coeff() const { return coeff_; }

  /// nx x ny matrix of u(x_i, y_j).
  Eigen::MatrixXd physical() const;

  double max_abs() const;

private:
  GridPtr grid_;
  Eigen::MatrixXd coeff_;
};

} // namespace kzk
