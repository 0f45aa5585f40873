#include "hrnvo/fft.hpp"

#include <fftw3.h>

#include <vector>

namespace hrnvo {

namespace {

// FFTW_UNALIGNED lets the new-array execute functions accept any buffer the
// caller hands us, at the cost of SIMD alignment tricks we don't need here.
constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* asFftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft1d::Fft1d(int length) : length_(length) {
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(length));
  forwardPlan_ = fftw_plan_dft_1d(length, asFftw(scratch.data()), asFftw(scratch.data()),
                                  FFTW_FORWARD, kPlanFlags);
  backwardPlan_ = fftw_plan_dft_1d(length, asFftw(scratch.data()), asFftw(scratch.data()),
                                   FFTW_BACKWARD, kPlanFlags);
}

Fft1d::~Fft1d() {
  fftw_destroy_plan(static_cast<fftw_plan>(forwardPlan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backwardPlan_));
}

void Fft1d::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forwardPlan_),
                   asFftw(const_cast<std::complex<double>*>(in)), asFftw(out));
}

void Fft1d::backward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backwardPlan_),
                   asFftw(const_cast<std::complex<double>*>(in)), asFftw(out));
}

Fft2d::Fft2d(int rows, int cols) : rows_(rows), cols_(cols) {
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(rows) * cols);
  // Column-major (rows, cols) memory viewed as a row-major (cols, rows)
  // array, so FFTW's n0 is our column count.
  forwardPlan_ = fftw_plan_dft_2d(cols, rows, asFftw(scratch.data()), asFftw(scratch.data()),
                                  FFTW_FORWARD, kPlanFlags);
  backwardPlan_ = fftw_plan_dft_2d(cols, rows, asFftw(scratch.data()), asFftw(scratch.data()),
                                   FFTW_BACKWARD, kPlanFlags);
}

Fft2d::~Fft2d() {
  fftw_destroy_plan(static_cast<fftw_plan>(forwardPlan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backwardPlan_));
}

void Fft2d::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forwardPlan_),
                   asFftw(const_cast<std::complex<double>*>(in)), asFftw(out));
}

void Fft2d::backward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backwardPlan_),
                   asFftw(const_cast<std::complex<double>*>(in)), asFftw(out));
}

}  // namespace hrnvo
