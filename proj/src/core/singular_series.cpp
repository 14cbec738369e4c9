#include "singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace circlekit {

namespace {

Complex phase(std::int64_t num, std::int64_t den) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

void require_ks(int k, int s) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (s < 1) throw DomainError("s must be >= 1");
}

}  // namespace

std::vector<Complex> gauss_sums_all(std::int64_t q, int k) {
  auto hist = kth_power_histogram(q, k);
  std::vector<Complex> h(hist.begin(), hist.end());
  return dft_positive(h);
}

Complex s_n_q(std::int64_t q, std::int64_t n, int k, int s) {
  if (q < 1) throw DomainError("s_n_q requires q >= 1");
  require_ks(k, s);
  auto sums = gauss_sums_all(q, k);
  const std::int64_t nr = ((n % q) + q) % q;
  Complex total{0.0, 0.0};
  const double inv_q = 1.0 / static_cast<double>(q);
  for (std::int64_t a = 1; a <= q; ++a) {
    if (gcd64(a, q) != 1) continue;
    const std::int64_t idx = a % q;
    Complex term = std::pow(sums[idx] * inv_q, s);
    const auto an = static_cast<std::int64_t>((static_cast<unsigned __int128>(idx) * nr) % q);
    total += term * phase((q - an) % q, q);
  }
  return total;
}

LocalFactorReport chi_p(std::int64_t p, std::int64_t n, int k, int s) {
  require_ks(k, s);
  if (!is_prime_trial(p)) throw DomainError("chi_p requires a prime, got " + std::to_string(p));
  LocalFactorReport rep;
  rep.p = p;
  rep.snp = s_n_q(p, n, k, s);
  rep.chi_via_snp = 1.0 - rep.snp.real() / static_cast<double>(p - 1);
  rep.mp = mp_count(p, n, k, s);
  rep.chi_via_mp =
      std::pow(static_cast<double>(p), 1 - s) / static_cast<double>(p - 1) * static_cast<double>(rep.mp);
  if (std::abs(rep.chi_via_snp - rep.chi_via_mp) > 1e-9 || std::abs(rep.snp.imag()) > 1e-9) {
    std::ostringstream os;
    os.precision(15);
    os << "local factor mismatch at p=" << p << " n=" << n << " k=" << k << " s=" << s
       << ": exponential-sum route " << rep.chi_via_snp << " (imag " << rep.snp.imag()
       << "), congruence route " << rep.chi_via_mp;
    throw ConsistencyError(os.str());
  }
  return rep;
}

std::vector<SeriesPartial> series_partials(std::int64_t n, int k, int s, const std::vector<std::int64_t>& xs,
                                           const ResourceBudget& budget) {
  require_ks(k, s);
  std::int64_t xmax = 1;
  for (auto x : xs) {
    if (x < 1) throw DomainError("series_partial requires X >= 1");
    xmax = std::max(xmax, x);
  }
  ArithTables tables(xmax, budget);
  std::vector<Complex> terms(static_cast<std::size_t>(xmax + 1), Complex{0.0, 0.0});
  parallel_for(static_cast<std::size_t>(xmax), budget.threads, [&](std::size_t i) {
    const auto q = static_cast<std::int64_t>(i + 1);
    const int mu = tables.mobius(q);
    if (mu == 0) return;
    terms[q] = static_cast<double>(mu) * s_n_q(q, n, k, s) / static_cast<double>(tables.phi(q));
  });
  std::vector<SeriesPartial> out;
  out.reserve(xs.size());
  for (auto x : xs) {
    Complex acc{0.0, 0.0};
    for (std::int64_t q = 1; q <= x; ++q) acc += terms[q];
    out.push_back({x, acc.real(), acc.imag()});
  }
  return out;
}

double series_partial(std::int64_t n, int k, int s, std::int64_t x) {
  return series_partials(n, k, s, {x}).front().value;
}

LocalDensityTable::LocalDensityTable(int k, int s, std::int64_t cutoff, const ResourceBudget& budget)
    : k_(k), s_(s), cutoff_(cutoff) {
  require_ks(k, s);
  if (cutoff < 2) throw DomainError("prime cutoff must be >= 2");
  auto table = sieve_primes(cutoff, budget);
  primes_.assign(table.primes().begin(), table.primes().end());
  double bytes = 0;
  for (auto p : primes_) bytes += static_cast<double>(p) * sizeof(double);
  budget.require(static_cast<std::size_t>(bytes), "local density table");
  chi_.resize(primes_.size());
  std::vector<double> imag(primes_.size(), 0.0);
  parallel_for(primes_.size(), budget.threads, [&](std::size_t i) {
    const std::int64_t p = primes_[i];
    auto sums = gauss_sums_all(p, k_);
    std::vector<Complex> t(static_cast<std::size_t>(p), Complex{0.0, 0.0});
    const double inv_p = 1.0 / static_cast<double>(p);
    for (std::int64_t a = 1; a < p; ++a) t[a] = std::pow(sums[a] * inv_p, s_);
    // S_r(p) = sum_a T(a) e(-ar/p) for all r at once
    auto sr = dft_negative(t);
    auto& row = chi_[i];
    row.resize(static_cast<std::size_t>(p));
    double worst = 0.0;
    for (std::int64_t r = 0; r < p; ++r) {
      row[r] = 1.0 - sr[r].real() / static_cast<double>(p - 1);
      worst = std::max(worst, std::abs(sr[r].imag()));
    }
    imag[i] = worst;
  });
  for (double v : imag) max_imag_ = std::max(max_imag_, v);
}

double LocalDensityTable::chi(std::size_t prime_index, std::int64_t n) const {
  const std::int64_t p = primes_.at(prime_index);
  return chi_[prime_index][static_cast<std::size_t>(((n % p) + p) % p)];
}

double LocalDensityTable::product(std::int64_t n) const {
  double prod = 1.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) prod *= chi(i, n);
  return prod;
}

double LocalDensityTable::tail_constant(std::int64_t p_limit) const {
  double c = 0.0;
  for (std::size_t i = 0; i < primes_.size() && primes_[i] <= p_limit; ++i) {
    const double scale = std::pow(static_cast<double>(primes_[i]), 1.5);
    for (double v : chi_[i]) c = std::max(c, std::abs(v - 1.0) * scale);
  }
  return c;
}

std::int64_t LocalDensityTable::empirical_p0() const {
  std::int64_t p0 = 2;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const double floor_v = 1.0 - std::pow(static_cast<double>(primes_[i]), -1.25);
    for (double v : chi_[i]) {
      if (v < floor_v) {
        p0 = i + 1 < primes_.size() ? primes_[i + 1] : primes_[i] + 1;
        break;
      }
    }
  }
  return p0;
}

double prime_tail_sum(std::int64_t cutoff) {
  if (cutoff < 2) cutoff = 2;
  const std::int64_t upper = cutoff * 100;
  auto table = sieve_primes(upper);
  double sum = 0.0;
  for (auto p : table.primes())
    if (p > cutoff) sum += std::pow(static_cast<double>(p), -1.5);
  // sum_{p > Y} p^{-3/2} <= (1 + o(1)) * 2 / (sqrt(Y) log Y); doubled for slack
  const double y = static_cast<double>(upper);
  return sum + 4.0 / (std::sqrt(y) * std::log(y));
}

SeriesReport euler_product(std::int64_t n, int k, int s, std::int64_t prime_cutoff,
                           const std::vector<std::int64_t>& partial_xs, const ResourceBudget& budget) {
  LocalDensityTable table(k, s, prime_cutoff, budget);
  SeriesReport rep;
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.prime_cutoff = prime_cutoff;
  rep.convergence_guaranteed = s >= 3;
  rep.max_imag_residue = table.max_imag_residue();
  rep.min_chi = 1e300;
  double prod = 1.0;
  for (std::size_t i = 0; i < table.primes().size(); ++i) {
    const double c = table.chi(i, n);
    rep.min_chi = std::min(rep.min_chi, c);
    if (!(c > 0)) rep.nonpositive_factor = true;
    prod *= c;
  }
  rep.product_value = prod;
  rep.tail_constant = table.tail_constant();
  const double x = rep.tail_constant * prime_tail_sum(prime_cutoff);
  rep.tail_bound = x < 1.0 ? -std::log1p(-x) : std::numeric_limits<double>::infinity();
  rep.empirical_p0 = table.empirical_p0();
  if (!partial_xs.empty()) rep.partials = series_partials(n, k, s, partial_xs, budget);
  return rep;
}

}  // namespace circlekit
