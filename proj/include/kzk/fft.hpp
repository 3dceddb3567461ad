#pragma once

#include <Eigen/Dense>

namespace kzk {

/// Column-wise real FFT: returns (n/2 + 1) x cols coefficients c_k with
/// u(x_j) = sum_k c_k e^{2 pi i k j / n} (normalized by 1/n).
Eigen::MatrixXcd rfft_columns(const Eigen::MatrixXd& u);

/// Inverse of rfft_columns for n rows.
Eigen::MatrixXd irfft_columns(const Eigen::MatrixXcd& h, int n);

} // namespace kzk
