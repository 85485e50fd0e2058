#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace tomokernel::detail {

using cplx = std::complex<double>;

// In-place unnormalized DFTs backed by cached FFTW plans. Safe to call from
// several threads.
void fft_1d(cplx* data, int n, bool inverse);
void fft_2d(cplx* data, int n0, int n1, bool inverse);

// Smallest 2^a 3^b 5^c >= n.
int good_fft_size(int n);

// Exact linear convolution y_i = sum_j w(i + offset - j) x_j, i < n_out,
// j < n_in, through one zero-padded FFT pair. The kernel spectrum is built
// once; apply() is reentrant.
class LinearConvolver {
 public:
  LinearConvolver(int n_in, int n_out, int offset, const std::function<double(long)>& kernel);

  void apply(const cplx* x, cplx* y) const;

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }

 private:
  int n_in_;
  int n_out_;
  int size_;
  std::vector<cplx> spectrum_;
};

}  // namespace tomokernel::detail
