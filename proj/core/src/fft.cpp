#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace tomokernel::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan cached_plan(int n0, int n1, bool inverse) {
  static std::map<std::tuple<int, int, bool>, fftw_plan> plans;
  std::lock_guard lock(planner_mutex());
  const auto key = std::make_tuple(n0, n1, inverse);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  const std::size_t total = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1);
  auto* scratch = fftw_alloc_complex(total);
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = (n1 > 0) ? fftw_plan_dft_2d(n0, n1, scratch, scratch, sign, flags)
                            : fftw_plan_dft_1d(n0, scratch, scratch, sign, flags);
  fftw_free(scratch);
  if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
  plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_1d(cplx* data, int n, bool inverse) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(cached_plan(n, 0, inverse), p, p);
}

void fft_2d(cplx* data, int n0, int n1, bool inverse) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(cached_plan(n0, n1, inverse), p, p);
}

int good_fft_size(int n) {
  int best = 1;
  while (best < n) best *= 2;
  for (int a = 1; a < best; a *= 2) {
    for (int b = a; b < best; b *= 3) {
      for (int c = b; c < best; c *= 5) {
        if (c >= n && c < best) best = c;
      }
    }
  }
  return best;
}

LinearConvolver::LinearConvolver(int n_in, int n_out, int offset, const std::function<double(long)>& kernel)
    : n_in_(n_in), n_out_(n_out) {
  if (n_in < 1 || n_out < 1) throw std::invalid_argument("LinearConvolver: empty input or output");
  size_ = good_fft_size(n_in + n_out - 1);
  spectrum_.assign(size_, cplx(0.0, 0.0));
  for (int s = 0; s < n_in + n_out - 1; ++s) {
    spectrum_[s] = kernel(static_cast<long>(s) - (n_in - 1) + offset);
  }
  fft_1d(spectrum_.data(), size_, false);
  for (auto& v : spectrum_) v /= static_cast<double>(size_);
}

void LinearConvolver::apply(const cplx* x, cplx* y) const {
  std::vector<cplx> buf(size_, cplx(0.0, 0.0));
  for (int j = 0; j < n_in_; ++j) buf[j] = x[j];
  fft_1d(buf.data(), size_, false);
  for (int k = 0; k < size_; ++k) buf[k] *= spectrum_[k];
  fft_1d(buf.data(), size_, true);
  for (int i = 0; i < n_out_; ++i) y[i] = buf[i + n_in_ - 1];
}

}  // namespace tomokernel::detail
