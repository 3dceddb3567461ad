#pragma once

#include "kzk/field.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kzk {

/// Square band matrix with kl = ku = 3 and a LAPACK band LU.
class BandMatrix {
public:
  static constexpr int kBand = 3;

  explicit BandMatrix(int n = 0);

  int size() const { return n_; }
  double& at(int i, int j);
  double at(int i, int j) const;
  bool in_band(int i, int j) const { return j - i <= kBand && i - j <= kBand; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd dense() const;

private:
  int n_;
  Eigen::MatrixXd band_;  // band_(kBand + i - j, j)
};

/// Factorized band matrix (dgbtrf); solve() calls dgbtrs.
class BandLU {
public:
  explicit BandLU(const BandMatrix& m);
  void solve(Eigen::Ref<Eigen::VectorXd> rhs) const;

private:
  int n_;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
};

/// Per-y-mode discretization of A_l = -d5 + d3 + (b - lambda_l) d1 acting on
/// the interior unknowns u_1..u_{nx-2}, so that u_t = -A_l u + N + f.
BandMatrix assemble_mode_operator(int nx, double dx, double b, double lambda);

/// The family {A_l} for every retained y-mode.
std::vector<BandMatrix> assemble_linear_operator(const Grid& grid, double b);

/// Applies A_l to a full column (length nx, boundary values ignored) and
/// returns the result at all nodes with zeros at the two Dirichlet ends.
Eigen::VectorXd apply_mode_operator(const BandMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& u);

} // namespace kzk
