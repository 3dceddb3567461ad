#include "kzk/field.hpp"

#include <stdexcept>

namespace kzk {

Grid::Grid(double X_max_, int nx_, EigenBasis basis_, double dt_, double T_)
    : X_max(X_max_), nx(nx_), basis(std::move(basis_)), dt(dt_), T(T_) {
  if (!(X_max > 0.0)) throw std::invalid_argument("X_max must be positive");
  if (nx < 16) throw std::invalid_argument("nx must be at least 16");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (T < 0.0) throw std::invalid_argument("T must be non-negative");
}

GridPtr make_grid(double X_max, int nx, BCFamily family, double L, int ny_modes, double dt,
                  double T) {
  return std::make_shared<const Grid>(X_max, nx, build_basis(family, L, ny_modes), dt, T);
}

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  coeff_ = Eigen::MatrixXd::Zero(grid_->nx, grid_->modes());
}

Field::Field(GridPtr grid, Eigen::MatrixXd coeff) : grid_(std::move(grid)), coeff_(std::move(coeff)) {
  if (coeff_.rows() != grid_->nx || coeff_.cols() != grid_->modes())
    throw std::invalid_argument("coefficient matrix does not match the grid");
}

Field Field::from_physical(GridPtr grid, const Eigen::MatrixXd& values) {
  if (values.rows() != grid->nx || values.cols() != grid->ny())
    throw std::invalid_argument("physical samples do not match the grid");
  Eigen::MatrixXd c = values * grid->basis.analysis().transpose();
  return {std::move(grid), std::move(c)};
}

Field Field::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
  Eigen::MatrixXd v(grid->nx, grid->ny());
  const auto& y = grid->basis.nodes();
  for (int i = 0; i < grid->nx; ++i)
    for (int j = 0; j < grid->ny(); ++j) v(i, j) = f(grid->x(i), y(j));
  return from_physical(std::move(grid), v);
}

Eigen::MatrixXd Field::physical() const { return coeff_ * grid_->basis.synthesis().transpose(); }

double Field::max_abs() const { return coeff_.size() ? physical().cwiseAbs().maxCoeff() : 0.0; }

} // namespace kzk
