// SPDX-License-Identifier: Apache-2.0
#include "oamsim/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "oamsim/errors.hpp"

namespace oamsim {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2D::Fft2D(int n) : n_(n) {
  if (n < 1) throw ValidationError("Fft2D: n must be positive");
  Eigen::MatrixXcd scratch(n, n);
  auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
  std::scoped_lock lock(planner_mutex());
  // Column-major storage: FFTW sees the transpose, which is immaterial for a
  // full 2D transform as long as index conventions stay consistent.
  plan_fwd_ = fftw_plan_dft_2d(n, n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_2d(n, n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_fwd_ == nullptr || plan_bwd_ == nullptr)
    throw InvariantError("Fft2D: FFTW plan creation failed");
}

Fft2D::~Fft2D() {
  std::scoped_lock lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft2D::forward(Eigen::MatrixXcd& data) const {
  if (data.rows() != n_ || data.cols() != n_) throw ValidationError("Fft2D: shape mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), ptr, ptr);
}

void Fft2D::backward(Eigen::MatrixXcd& data) const {
  if (data.rows() != n_ || data.cols() != n_) throw ValidationError("Fft2D: shape mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), ptr, ptr);
}

}  // namespace oamsim
