#include "fraclab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "fraclab/field.hpp"

namespace fraclab {

namespace {

std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

fftw_plan cached_plan(int rows, int cols, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_tuple(rows, cols, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  auto* tmp = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * rows * cols));
  fftw_plan p = fftw_plan_dft_2d(rows, cols, tmp, tmp, sign, FFTW_ESTIMATE);
  fftw_free(tmp);
  plans.emplace(key, p);
  return p;
}

}  // namespace

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftBuffer::FftBuffer(int rows, int cols) : rows_(rows), cols_(cols) {
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * rows * cols));
  std::fill(data_, data_ + static_cast<std::size_t>(rows) * cols, std::complex<double>{});
}

FftBuffer::~FftBuffer() {
  if (data_) fftw_free(data_);
}

FftBuffer::FftBuffer(FftBuffer&& o) noexcept : rows_(o.rows_), cols_(o.cols_), data_(o.data_) { o.data_ = nullptr; }

void FftBuffer::transform(int sign) {
  fftw_plan p = cached_plan(rows_, cols_, sign);
  auto* d = reinterpret_cast<fftw_complex*>(data_);
  fftw_execute_dft(p, d, d);
}

int convolution_padding(int nx, int ny, int K) { return next_pow2(std::max(nx, ny) + K); }

std::vector<std::complex<double>> fft_convolve(const std::vector<std::complex<double>>& u, int nx, int ny,
                                               const OffsetTable& kernel, int pad) {
  const int K = kernel.K;
  if (pad < std::max(nx, ny) + K)
    throw InvalidInput("FFT padding " + std::to_string(pad) + " causes wraparound; need at least " +
                       std::to_string(std::max(nx, ny) + K));
  FftBuffer fu(pad, pad), fk(pad, pad);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) fu.at(j, i) = u[static_cast<std::size_t>(j) * nx + i];
  for (int zy = -K; zy <= K; ++zy)
    for (int zx = -K; zx <= K; ++zx) fk.at((zy + pad) % pad, (zx + pad) % pad) = kernel.at(zx, zy);
  fu.transform(FFTW_FORWARD);
  fk.transform(FFTW_FORWARD);
  const std::size_t n = static_cast<std::size_t>(pad) * pad;
  for (std::size_t k = 0; k < n; ++k) fu.data()[k] *= fk.data()[k];
  fu.transform(FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(n);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out[static_cast<std::size_t>(j) * nx + i] = fu.at(j, i) * norm;
  return out;
}

std::vector<std::complex<double>> fft_correlate(const std::vector<std::complex<double>>& a,
                                                const std::vector<std::complex<double>>& b, int nx, int ny) {
  const int P = next_pow2(2 * std::max(nx, ny) - 1);
  FftBuffer fa(P, P), fb(P, P);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      fa.at(j, i) = a[static_cast<std::size_t>(j) * nx + i];
      fb.at(j, i) = b[static_cast<std::size_t>(j) * nx + i];
    }
  fa.transform(FFTW_FORWARD);
  fb.transform(FFTW_FORWARD);
  const std::size_t n = static_cast<std::size_t>(P) * P;
  for (std::size_t k = 0; k < n; ++k) fb.data()[k] *= std::conj(fa.data()[k]);
  fb.transform(FFTW_BACKWARD);
  const double norm = 1.0 / static_cast<double>(n);
  const int W = 2 * nx - 1;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(W) * (2 * ny - 1));
  for (int zy = -(ny - 1); zy <= ny - 1; ++zy)
    for (int zx = -(nx - 1); zx <= nx - 1; ++zx)
      out[static_cast<std::size_t>(zy + ny - 1) * W + (zx + nx - 1)] = fb.at((zy + P) % P, (zx + P) % P) * norm;
  return out;
}

}  // namespace fraclab
