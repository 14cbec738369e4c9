#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace circlekit {

namespace {

// FFTW's planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex> run_dft(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  if (n == 0) return out;
  auto* buf_in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* buf_out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf_in, buf_out, sign, FFTW_ESTIMATE);
  }
  std::memcpy(buf_in, in.data(), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(out.data()), buf_out, sizeof(fftw_complex) * n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf_in);
  fftw_free(buf_out);
  return out;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::vector<Complex> dft_positive(std::span<const Complex> coeffs) {
  return run_dft(coeffs, FFTW_BACKWARD);
}

std::vector<Complex> dft_negative(std::span<const Complex> coeffs) {
  return run_dft(coeffs, FFTW_FORWARD);
}

std::vector<double> convolve_real(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t m = next_pow2(out_len);
  std::vector<Complex> fa(m), fb(m);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  auto ta = dft_negative(fa);
  auto tb = dft_negative(fb);
  for (std::size_t i = 0; i < m; ++i) ta[i] *= tb[i];
  auto back = dft_positive(ta);
  std::vector<double> out(out_len);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = back[i].real() * inv;
  return out;
}

}  // namespace circlekit
