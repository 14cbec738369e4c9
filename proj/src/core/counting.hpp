#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "budget.hpp"

namespace circlekit {

enum class ConvolutionMethod { automatic, direct, float_fft_verified, integer_safe };
std::string to_string(ConvolutionMethod m);
ConvolutionMethod convolution_method_from_string(const std::string& s);

struct ConvolutionPlan {
  std::int64_t n_max = 0;
  int k = 0;
  int s = 0;
  ConvolutionMethod method = ConvolutionMethod::automatic;
  std::int64_t fft_size = 0;  // power of two > (s+1) n_max

  static ConvolutionPlan make(int k, int s, std::int64_t n_max,
                              ConvolutionMethod method = ConvolutionMethod::automatic);
};

struct CountResult {
  std::vector<std::int64_t> r;  // r[n] for 0 <= n <= n_max
  ConvolutionMethod used = ConvolutionMethod::direct;
  bool fell_back = false;
  double max_residue = 0.0;  // worst |x - round(x)| seen on the float route
};

// Exact count of ordered (p, x_1..x_s), p prime, x_i >= 1, with p + sum x_i^k = n.
std::int64_t count_direct(int k, int s, std::int64_t n, const ResourceBudget& budget = {});

// Linear convolution truncated to `keep` entries, exact over the integers
// (three NTT primes, CRT). Inputs must be nonnegative.
std::vector<std::int64_t> ntt_convolve(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                       std::size_t keep);

// Float FFT convolution, truncated; nullopt when any entry is further than
// 0.25 from an integer or too large for a double.
std::optional<std::vector<std::int64_t>> float_convolve_verified(std::span<const std::int64_t> a,
                                                                 std::span<const std::int64_t> b, std::size_t keep,
                                                                 double* max_residue = nullptr);

// coefficients of A(z)^s, A(z) = sum_{x >= 1} z^{x^k}, up to z^{n_max}
CountResult power_counts(int k, int s, std::int64_t n_max, ConvolutionMethod method = ConvolutionMethod::automatic,
                         const ResourceBudget& budget = {});

CountResult count_range(int k, int s, std::int64_t n_max, const ConvolutionPlan& plan,
                        const ResourceBudget& budget = {});
inline CountResult count_range(int k, int s, std::int64_t n_max) {
  return count_range(k, s, n_max, ConvolutionPlan::make(k, s, n_max));
}

// Number of ordered (x_1..x_s), x_i >= 1, with x_1^k + ... + x_s^k = p prime <= N.
std::int64_t count_conjugate(int k, int s, std::int64_t N, const ResourceBudget& budget = {});

// Gamma(1+1/k)^s / Gamma(1+s/k)
double hl_gamma_factor(int k, int s);
// series * Gamma factor * n^{s/k} / log n. The constant is a heuristic.
double hl_prediction(int k, int s, std::int64_t n, double series_value);

inline constexpr const char* kHeuristicNote = "heuristic constant, not asserted by the source analysis";

struct CountRow {
  std::int64_t n = 0;
  std::int64_t r = 0;
  double prediction = 0.0;
  double ratio = 0.0;
  double series_value = 0.0;
};

struct CompareReport {
  int k = 0;
  int s = 0;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  std::int64_t stride = 1;
  std::int64_t prime_cutoff = 0;
  ConvolutionMethod method = ConvolutionMethod::direct;
  std::vector<CountRow> rows;
  double min_ratio = 0.0;
  double mean_ratio = 0.0;
  double min_order_ratio = 0.0;  // min r / (n^{s/k} / log n)
  std::int64_t zero_count = 0;
  std::vector<std::int64_t> zero_ns;
  std::int64_t total_r = 0;
  double total_prediction = 0.0;
  std::string note = kHeuristicNote;
};

CompareReport compare_report(int k, int s, std::int64_t n_lo, std::int64_t n_hi, std::int64_t stride = 1,
                             std::int64_t prime_cutoff = 10000, const ResourceBudget& budget = {});

}  // namespace circlekit
