#include "kzk/linear_operator.hpp"

#include "kzk/stencil.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kzk {

BandMatrix::BandMatrix(int n) : n_(n), band_(Eigen::MatrixXd::Zero(2 * kBand + 1, n)) {}

double& BandMatrix::at(int i, int j) {
  if (!in_band(i, j)) throw std::out_of_range("entry outside the band");
  return band_(kBand + i - j, j);
}

double BandMatrix::at(int i, int j) const {
  return in_band(i, j) ? band_(kBand + i - j, j) : 0.0;
}

Eigen::VectorXd BandMatrix::multiply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i0 = std::max(0, j - kBand), i1 = std::min(n_ - 1, j + kBand);
    for (int i = i0; i <= i1; ++i) r(i) += band_(kBand + i - j, j) * v(j);
  }
  return r;
}

Eigen::MatrixXd BandMatrix::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kBand); j <= std::min(n_ - 1, i + kBand); ++j) d(i, j) = at(i, j);
  return d;
}

BandLU::BandLU(const BandMatrix& m) : n_(m.size()) {
  constexpr int kl = BandMatrix::kBand, ku = BandMatrix::kBand;
  constexpr int ldab = 2 * kl + ku + 1;
  ab_.assign(static_cast<size_t>(ldab) * n_, 0.0);
  ipiv_.assign(n_, 0);
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku); i <= std::min(n_ - 1, j + kl); ++i)
      ab_[static_cast<size_t>(j) * ldab + kl + ku + i - j] = m.at(i, j);
  const lapack_int info =
      LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl, ku, ab_.data(), ldab, ipiv_.data());
  if (info != 0)
    throw std::runtime_error("band LU failed (dgbtrf info " + std::to_string(info) + ")");
}

void BandLU::solve(Eigen::Ref<Eigen::VectorXd> rhs) const {
  constexpr int kl = BandMatrix::kBand, ku = BandMatrix::kBand;
  const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl, ku, 1, ab_.data(),
                                         2 * kl + ku + 1, ipiv_.data(), rhs.data(), n_);
  if (info != 0)
    throw std::runtime_error("band solve failed (dgbtrs info " + std::to_string(info) + ")");
}

BandMatrix assemble_mode_operator(int nx, double dx, double b, double lambda) {
  if (nx < 16) throw std::invalid_argument("nx too small for the 7-point stencil");
  const int N = nx - 1;
  const int n = N - 1;
  BandMatrix a(n);
  const auto& s5 = central_stencil(5);
  const auto& s3 = central_stencil(3);
  const auto& s1 = central_stencil(1);
  std::array<double, 7> row{};
  for (int o = 0; o < 7; ++o)
    row[o] = -s5[o] / std::pow(dx, 5) + s3[o] / std::pow(dx, 3) + (b - lambda) * s1[o] / dx;

  const auto& gl = Closure::left();
  for (int i = 1; i <= N - 1; ++i) {
    for (int o = 0; o < 7; ++o) {
      if (row[o] == 0.0) continue;
      const int j = i + o - kGhosts;
      if (j >= 1 && j <= N - 1) {
        a.at(i - 1, j - 1) += row[o];
      } else if (j < 0) {
        for (int m = 1; m <= 3; ++m) a.at(i - 1, m - 1) += row[o] * gl(-j - 1, m - 1);
      } else if (j > N) {
        a.at(i - 1, N - 2) += row[o] * Closure::right(j - N);
      }
    }
  }
  return a;
}

std::vector<BandMatrix> assemble_linear_operator(const Grid& grid, double b) {
  std::vector<BandMatrix> ops;
  ops.reserve(grid.modes());
  for (int l = 0; l < grid.modes(); ++l)
    ops.push_back(assemble_mode_operator(grid.nx, grid.dx(), b, grid.basis.lambda(l)));
  return ops;
}

Eigen::VectorXd apply_mode_operator(const BandMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& u) {
  const int n = a.size();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n + 2);
  r.segment(1, n) = a.multiply(u.segment(1, n));
  return r;
}

} // namespace kzk
