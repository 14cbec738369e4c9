#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace circlekit {

using Complex = std::complex<double>;

// values[j] = sum_m coeffs[m] * e(+j*m/M), M = coeffs.size().
std::vector<Complex> dft_positive(std::span<const Complex> coeffs);

// values[j] = sum_m coeffs[m] * e(-j*m/M).
std::vector<Complex> dft_negative(std::span<const Complex> coeffs);

// Linear convolution of two real sequences through a double-precision FFT.
std::vector<double> convolve_real(std::span<const double> a, std::span<const double> b);

std::size_t next_pow2(std::size_t n);

}  // namespace circlekit
