// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace oamsim {

/// Unnormalized in-place 2D complex DFT on n x n arrays. Plan creation and
/// destruction are serialized internally (FFTW requirement); execution is
/// safe from concurrent threads on distinct data. Plans use FFTW_ESTIMATE so
/// results are reproducible run to run.
class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();

  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int n() const { return n_; }

  /// data(x) -> sum_x data(x) exp(-2 pi i k.x / n)
  void forward(Eigen::MatrixXcd& data) const;
  /// data(k) -> sum_k data(k) exp(+2 pi i k.x / n), no 1/n^2 factor
  void backward(Eigen::MatrixXcd& data) const;

 private:
  int n_;
  void* plan_fwd_;
  void* plan_bwd_;
};

}  // namespace oamsim
