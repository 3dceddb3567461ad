#include "kzk/fft.hpp"

#include <fftw3.h>

namespace kzk {

Eigen::MatrixXcd rfft_columns(const Eigen::MatrixXd& u) {
  int n = static_cast<int>(u.rows());
  const int cols = static_cast<int>(u.cols());
  const int nh = n / 2 + 1;
  Eigen::MatrixXd in = u;
  Eigen::MatrixXcd out(nh, cols);
  fftw_plan p = fftw_plan_many_dft_r2c(1, &n, cols, in.data(), nullptr, 1, n,
                                       reinterpret_cast<fftw_complex*>(out.data()), nullptr, 1, nh,
                                       FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  return out / static_cast<double>(n);
}

Eigen::MatrixXd irfft_columns(const Eigen::MatrixXcd& h, int n) {
  const int cols = static_cast<int>(h.cols());
  const int nh = n / 2 + 1;
  Eigen::MatrixXcd in = h;
  Eigen::MatrixXd out(n, cols);
  fftw_plan p = fftw_plan_many_dft_c2r(1, &n, cols, reinterpret_cast<fftw_complex*>(in.data()),
                                       nullptr, 1, nh, out.data(), nullptr, 1, n, FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  return out;
}

} // namespace kzk
