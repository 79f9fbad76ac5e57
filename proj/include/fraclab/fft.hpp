#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

/// Smallest power of two >= n.
int next_pow2(int n);

/// Zero-padded complex buffer of P x Q allocated with FFTW alignment.
class FftBuffer {
 public:
  FftBuffer(int rows, int cols);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  FftBuffer(FftBuffer&& o) noexcept;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }
  std::complex<double>& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::complex<double> at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  /// In-place forward (sign -1) or unnormalised inverse (sign +1) transform.
  /// Plans are cached per (shape, sign) behind a mutex; execution is reentrant.
  void transform(int sign);

 private:
  int rows_, cols_;
  std::complex<double>* data_;
};

/// Linear convolution on an nx x ny grid (row-major, y rows):
///   out(x) = sum_{|z|_inf <= K} kernel(z) u(x - z),
/// evaluated by FFT with padding P >= n + K per axis (no wraparound).
std::vector<std::complex<double>> fft_convolve(const std::vector<std::complex<double>>& u, int nx, int ny,
                                               const OffsetTable& kernel, int pad);

/// Required padding for fft_convolve.
int convolution_padding(int nx, int ny, int K);

/// Cross-correlation C(z) = sum_x conj(a(x)) b(x + z) for all offsets with
/// |z_i| <= n_i - 1, returned in a (2 nx - 1) x (2 ny - 1) row-major array
/// indexed by (zx + nx - 1, zy + ny - 1).
std::vector<std::complex<double>> fft_correlate(const std::vector<std::complex<double>>& a,
                                                const std::vector<std::complex<double>>& b, int nx, int ny);

}  // namespace fraclab
