#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "budget.hpp"

namespace circlekit {

using Complex = std::complex<double>;

class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::int64_t limit, std::vector<std::int64_t> primes);

  std::int64_t limit() const { return limit_; }
  std::span<const std::int64_t> primes() const { return primes_; }
  std::span<const double> log_weights() const { return log_weights_; }

  // pi(x) and sum_{p <= x} log p, for x <= limit.
  std::int64_t prime_pi(std::int64_t x) const;
  double chebyshev_theta(std::int64_t x) const;
  bool is_prime(std::int64_t x) const;

 private:
  std::int64_t limit_ = 0;
  std::vector<std::int64_t> primes_;
  std::vector<double> log_weights_;
  std::vector<double> theta_prefix_;  // prefix sums of log_weights_
};

// Segmented sieve of Eratosthenes over odd numbers.
PrimeTable sieve_primes(std::int64_t limit, const ResourceBudget& budget = {});

// Plain byte-per-integer indicator, is_prime[x] for 0 <= x <= limit.
std::vector<std::uint8_t> prime_indicator(std::int64_t limit, const ResourceBudget& budget = {});

struct SmoothSet {
  std::int64_t p_limit = 0;
  std::int64_t r_limit = 0;
  std::vector<std::int64_t> members;  // ascending, always contains 1
  std::size_t cardinality() const { return members.size(); }
};

// Integers in [1, P] whose prime factors are all <= R.
SmoothSet smooth_set(std::int64_t P, std::int64_t R, const ResourceBudget& budget = {});

class ArithTables {
 public:
  explicit ArithTables(std::int64_t limit, const ResourceBudget& budget = {});

  std::int64_t limit() const { return limit_; }
  int mobius(std::int64_t n) const { return mobius_.at(static_cast<std::size_t>(n)); }
  std::int64_t phi(std::int64_t n) const { return phi_.at(static_cast<std::size_t>(n)); }
  std::int64_t spf(std::int64_t n) const { return spf_.at(static_cast<std::size_t>(n)); }
  std::vector<std::int64_t> prime_divisors(std::int64_t n) const;

 private:
  std::int64_t limit_;
  std::vector<std::int8_t> mobius_;
  std::vector<std::int64_t> phi_;
  std::vector<std::int64_t> spf_;
};

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t mod);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
bool is_prime_trial(std::int64_t n);

// S(q, a) = sum_{x=1}^{q} e(a x^k / q), with x^k and a*x^k reduced mod q in
// integer arithmetic before the phase is formed.
Complex gauss_sum(std::int64_t q, std::int64_t a, int k);

// hist[r] = #{x in [1, q] : x^k = r mod q}
std::vector<std::int64_t> kth_power_histogram(std::int64_t q, int k);

// Ramanujan sum c_q(a) = mu(q/(q,a)) phi(q) / phi(q/(q,a)).
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t a, const ArithTables& tables);

// Number of (b, x_1..x_s) mod p with b != 0 and b + x_1^k + ... + x_s^k = n mod p.
// Cyclic convolution of the k-th power histogram, raised to the s-th power by
// repeated squaring.
std::int64_t mp_count(std::int64_t p, std::int64_t n, int k, int s);

// All residues at once: out[r] = M_p(r) for r in [0, p).
std::vector<std::int64_t> mp_count_all(std::int64_t p, int k, int s);

}  // namespace circlekit
