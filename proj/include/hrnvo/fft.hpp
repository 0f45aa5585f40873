#pragma once

#include <complex>
#include <memory>

namespace hrnvo {

// Thin FFTW wrapper. Plans are created once at construction (planning is
// not thread-safe; construction is single-owner) and executed through the
// new-array interface on caller buffers, which is safe from any thread.
// Transforms are unnormalized in both directions, matching the raw DFT
// sums the codebook algebra needs.
class Fft1d {
 public:
  explicit Fft1d(int length);
  ~Fft1d();
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  int length() const { return length_; }
  // out[f] = sum_m in[m] exp(-2*pi*i*f*m/length)
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  // out[m] = sum_f in[f] exp(+2*pi*i*f*m/length)
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int length_;
  void* forwardPlan_;
  void* backwardPlan_;
};

// 2-D transform over a column-major (rows x cols) buffer: element (r, c)
// lives at index r + c*rows, and frequency (fr, fc) lands at fr + fc*rows.
class Fft2d {
 public:
  Fft2d(int rows, int cols);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int rows_;
  int cols_;
  void* forwardPlan_;
  void* backwardPlan_;
};

}  // namespace hrnvo
