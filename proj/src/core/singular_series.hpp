#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "arith_core.hpp"
#include "budget.hpp"

namespace circlekit {

struct LocalFactorReport {
  std::int64_t p = 0;
  double chi_via_snp = 0.0;
  double chi_via_mp = 0.0;
  std::int64_t mp = 0;
  Complex snp;
};

// S(q, a) for every a in [0, q) from one transform of the k-th power histogram.
std::vector<Complex> gauss_sums_all(std::int64_t q, int k);

// S_n(q) = q^{-s} sum_{(a,q)=1} S(q,a)^s e(-an/q)
Complex s_n_q(std::int64_t q, std::int64_t n, int k, int s);

// Local factor by the exponential-sum route and the congruence-count route.
// Throws ConsistencyError when they differ by more than 1e-9.
LocalFactorReport chi_p(std::int64_t p, std::int64_t n, int k, int s);

struct SeriesPartial {
  std::int64_t x = 0;
  double value = 0.0;
  double imag_residue = 0.0;
};

// Truncated series sum_{q <= X} mu(q) S_n(q) / phi(q) evaluated at every X in
// xs (one pass up to max(xs)). Composite q are summed directly, without
// multiplicativity, so this stays independent of the Euler product.
std::vector<SeriesPartial> series_partials(std::int64_t n, int k, int s, const std::vector<std::int64_t>& xs,
                                           const ResourceBudget& budget = {});
double series_partial(std::int64_t n, int k, int s, std::int64_t x);

// chi_p(r) for every prime p <= cutoff and every residue r mod p.
class LocalDensityTable {
 public:
  LocalDensityTable(int k, int s, std::int64_t cutoff, const ResourceBudget& budget = {});

  int k() const { return k_; }
  int s() const { return s_; }
  std::int64_t cutoff() const { return cutoff_; }
  std::span<const std::int64_t> primes() const { return primes_; }
  double chi(std::size_t prime_index, std::int64_t n) const;
  // product over all tabulated primes, ascending
  double product(std::int64_t n) const;
  // largest |Im S_r(p)| seen while building
  double max_imag_residue() const { return max_imag_; }
  // max over p <= limit and r of |chi_p(r) - 1| p^{3/2}
  double tail_constant(std::int64_t p_limit = 1000) const;
  // smallest prime p0 such that chi_p(r) >= 1 - p^{-5/4} for every tabulated p >= p0 and all r
  std::int64_t empirical_p0() const;

 private:
  int k_, s_;
  std::int64_t cutoff_;
  std::vector<std::int64_t> primes_;
  std::vector<std::vector<double>> chi_;
  double max_imag_ = 0.0;
};

// Upper bound for sum_{p > cutoff} p^{-3/2}.
double prime_tail_sum(std::int64_t cutoff);

struct SeriesReport {
  std::int64_t n = 0;
  int k = 0;
  int s = 0;
  std::int64_t prime_cutoff = 0;
  double product_value = 0.0;
  double tail_constant = 0.0;
  // bound on |log(true product) - log(product_value)|
  double tail_bound = 0.0;
  double min_chi = 0.0;
  bool nonpositive_factor = false;
  bool convergence_guaranteed = true;
  double max_imag_residue = 0.0;
  std::int64_t empirical_p0 = 0;
  std::vector<SeriesPartial> partials;
};

SeriesReport euler_product(std::int64_t n, int k, int s, std::int64_t prime_cutoff,
                           const std::vector<std::int64_t>& partial_xs = {}, const ResourceBudget& budget = {});

}  // namespace circlekit
