#include "arith_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace circlekit {

PrimeTable::PrimeTable(std::int64_t limit, std::vector<std::int64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {
  log_weights_.reserve(primes_.size());
  theta_prefix_.reserve(primes_.size());
  double acc = 0.0;
  for (auto p : primes_) {
    double w = std::log(static_cast<double>(p));
    log_weights_.push_back(w);
    acc += w;
    theta_prefix_.push_back(acc);
  }
}

std::int64_t PrimeTable::prime_pi(std::int64_t x) const {
  if (x > limit_) throw DomainError("prime_pi beyond sieve limit");
  return std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin();
}

double PrimeTable::chebyshev_theta(std::int64_t x) const {
  auto c = prime_pi(x);
  return c == 0 ? 0.0 : theta_prefix_[static_cast<std::size_t>(c - 1)];
}

bool PrimeTable::is_prime(std::int64_t x) const {
  if (x > limit_) throw DomainError("is_prime beyond sieve limit");
  return std::binary_search(primes_.begin(), primes_.end(), x);
}

PrimeTable sieve_primes(std::int64_t limit, const ResourceBudget& budget) {
  if (limit < 2) throw DomainError("sieve_primes requires limit >= 2");
  const double est = 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) + 16;
  budget.require(static_cast<std::size_t>(est * 3 * sizeof(double)), "prime table");

  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<std::uint8_t> small(static_cast<std::size_t>(root + 1), 1);
  std::vector<std::int64_t> base;
  for (std::int64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::int64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  std::vector<std::int64_t> primes;
  primes.reserve(static_cast<std::size_t>(est));
  primes.push_back(2);
  // segment over odd numbers lo, lo+2, ...; slot i stands for lo + 2i
  constexpr std::int64_t kSlots = 1 << 16;
  std::vector<std::uint8_t> seg(kSlots);
  for (std::int64_t lo = 3; lo <= limit; lo += 2 * kSlots) {
    const std::int64_t hi = std::min(limit, lo + 2 * kSlots - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::size_t bi = 1; bi < base.size(); ++bi) {
      const std::int64_t p = base[bi];
      if (p * p > hi) break;
      std::int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      if (start % 2 == 0) start += p;
      for (std::int64_t m = start; m <= hi; m += 2 * p) seg[static_cast<std::size_t>((m - lo) / 2)] = 0;
    }
    for (std::int64_t m = lo; m <= hi; m += 2)
      if (seg[static_cast<std::size_t>((m - lo) / 2)]) primes.push_back(m);
  }
  return PrimeTable(limit, std::move(primes));
}

std::vector<std::uint8_t> prime_indicator(std::int64_t limit, const ResourceBudget& budget) {
  if (limit < 0) throw DomainError("prime_indicator requires limit >= 0");
  budget.require(static_cast<std::size_t>(limit + 1), "prime indicator");
  std::vector<std::uint8_t> is(static_cast<std::size_t>(limit + 1), 1);
  is[0] = 0;
  if (limit >= 1) is[1] = 0;
  for (std::int64_t i = 2; i * i <= limit; ++i) {
    if (!is[i]) continue;
    for (std::int64_t j = i * i; j <= limit; j += i) is[j] = 0;
  }
  return is;
}

SmoothSet smooth_set(std::int64_t P, std::int64_t R, const ResourceBudget& budget) {
  if (R < 1) throw DomainError("smooth_set requires R >= 1");
  if (R > P) throw DomainError("smooth_set requires R <= P");
  budget.require(static_cast<std::size_t>(P + 1) * sizeof(std::int64_t), "smooth set sieve");
  // lpf[x] ends as the largest prime factor of x: primes are visited in
  // ascending order and overwrite smaller ones.
  std::vector<std::int64_t> lpf(static_cast<std::size_t>(P + 1), 0);
  for (std::int64_t p = 2; p <= P; ++p) {
    if (lpf[p] != 0) continue;
    for (std::int64_t m = p; m <= P; m += p) lpf[m] = p;
  }
  SmoothSet out;
  out.p_limit = P;
  out.r_limit = R;
  for (std::int64_t x = 1; x <= P; ++x)
    if (lpf[x] <= R) out.members.push_back(x);
  return out;
}

ArithTables::ArithTables(std::int64_t limit, const ResourceBudget& budget) : limit_(limit) {
  if (limit < 1) throw DomainError("ArithTables requires limit >= 1");
  budget.require(static_cast<std::size_t>(limit + 1) * 17, "arithmetic tables");
  const auto n = static_cast<std::size_t>(limit + 1);
  mobius_.assign(n, 0);
  phi_.assign(n, 0);
  spf_.assign(n, 0);
  std::vector<std::int64_t> primes;
  mobius_[1] = 1;
  phi_[1] = 1;
  spf_[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = i;
      primes.push_back(i);
      mobius_[i] = -1;
      phi_[i] = i - 1;
    }
    for (auto p : primes) {
      const std::int64_t m = i * p;
      if (p > spf_[i] || m > limit) break;
      spf_[m] = p;
      if (i % p == 0) {
        mobius_[m] = 0;
        phi_[m] = phi_[i] * p;
      } else {
        mobius_[m] = static_cast<std::int8_t>(-mobius_[i]);
        phi_[m] = phi_[i] * (p - 1);
      }
    }
  }
}

std::vector<std::int64_t> ArithTables::prime_divisors(std::int64_t n) const {
  std::vector<std::int64_t> out;
  while (n > 1) {
    auto p = spf(n);
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  return out;
}

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1, b = static_cast<unsigned __int128>(((base % mod) + mod) % mod);
  while (exp > 0) {
    if (exp & 1) result = (result * b) % static_cast<unsigned __int128>(mod);
    b = (b * b) % static_cast<unsigned __int128>(mod);
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime_trial(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {
Complex unit_phase(std::int64_t num, std::int64_t den) {
  // e(num/den) with num already reduced to [0, den)
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}
}  // namespace

std::vector<std::int64_t> kth_power_histogram(std::int64_t q, int k) {
  if (q < 1) throw DomainError("kth_power_histogram requires q >= 1");
  if (k < 1) throw DomainError("kth_power_histogram requires k >= 1");
  std::vector<std::int64_t> hist(static_cast<std::size_t>(q), 0);
  for (std::int64_t x = 1; x <= q; ++x) ++hist[static_cast<std::size_t>(powmod(x, k, q))];
  return hist;
}

Complex gauss_sum(std::int64_t q, std::int64_t a, int k) {
  if (q < 1) throw DomainError("gauss_sum requires q >= 1");
  if (k < 1) throw DomainError("gauss_sum requires k >= 1");
  const std::int64_t ar = ((a % q) + q) % q;
  Complex sum{0.0, 0.0};
  for (std::int64_t x = 1; x <= q; ++x) {
    const std::int64_t r = powmod(x, k, q);
    const auto prod = static_cast<std::int64_t>((static_cast<unsigned __int128>(ar) * r) % q);
    sum += unit_phase(prod, q);
  }
  return sum;
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t a, const ArithTables& tables) {
  if (q < 1) throw DomainError("ramanujan_sum requires q >= 1");
  if (q > tables.limit()) throw DomainError("ramanujan_sum: q beyond arithmetic table limit");
  const std::int64_t g = gcd64(q, a);  // gcd(q, 0) = q
  const std::int64_t m = q / g;
  return tables.mobius(m) * tables.phi(q) / tables.phi(m);
}

namespace {

using Counts = std::vector<unsigned __int128>;

Counts cyclic_convolve(const Counts& a, const Counts& b, std::int64_t p) {
  Counts out(static_cast<std::size_t>(p), 0);
  for (std::int64_t i = 0; i < p; ++i) {
    if (a[i] == 0) continue;
    for (std::int64_t j = 0; j < p; ++j) {
      if (b[j] == 0) continue;
      std::int64_t r = i + j;
      if (r >= p) r -= p;
      out[r] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> mp_count_all(std::int64_t p, int k, int s) {
  if (!is_prime_trial(p)) throw DomainError("mp_count requires prime p, got " + std::to_string(p));
  if (s < 1) throw DomainError("mp_count requires s >= 1");
  if (k < 1) throw DomainError("mp_count requires k >= 1");
  // total number of tuples is (p - 1) p^s; keep it inside int64
  if ((s + 1) * std::log2(static_cast<double>(p)) > 62.0)
    throw ResourceError("mp_count: (p-1) p^s overflows 64-bit counts");

  Counts hist(static_cast<std::size_t>(p), 0);
  auto h = kth_power_histogram(p, k);
  for (std::int64_t r = 0; r < p; ++r) hist[r] = static_cast<unsigned __int128>(h[r]);
  Counts acc(static_cast<std::size_t>(p), 0);
  for (std::int64_t b = 1; b < p; ++b) acc[b] = 1;
  Counts base = hist;
  int e = s;
  while (e > 0) {
    if (e & 1) acc = cyclic_convolve(acc, base, p);
    e >>= 1;
    if (e > 0) base = cyclic_convolve(base, base, p);
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(p));
  for (std::int64_t r = 0; r < p; ++r) out[r] = static_cast<std::int64_t>(acc[r]);
  return out;
}

std::int64_t mp_count(std::int64_t p, std::int64_t n, int k, int s) {
  auto all = mp_count_all(p, k, s);
  return all[static_cast<std::size_t>(((n % p) + p) % p)];
}

}  // namespace circlekit
