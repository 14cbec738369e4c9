#include "counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "arith_core.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "singular_series.hpp"

namespace circlekit {

std::string to_string(ConvolutionMethod m) {
  switch (m) {
    case ConvolutionMethod::automatic: return "auto";
    case ConvolutionMethod::direct: return "direct";
    case ConvolutionMethod::float_fft_verified: return "float_fft_verified";
    case ConvolutionMethod::integer_safe: return "integer_safe";
  }
  return "unknown";
}

ConvolutionMethod convolution_method_from_string(const std::string& s) {
  if (s == "auto") return ConvolutionMethod::automatic;
  if (s == "direct") return ConvolutionMethod::direct;
  if (s == "float" || s == "float_fft_verified") return ConvolutionMethod::float_fft_verified;
  if (s == "integer" || s == "integer_safe") return ConvolutionMethod::integer_safe;
  throw ParseError("unknown convolution method '" + s + "'");
}

ConvolutionPlan ConvolutionPlan::make(int k, int s, std::int64_t n_max, ConvolutionMethod method) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (s < 0) throw DomainError("s must be >= 0");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  ConvolutionPlan p;
  p.n_max = n_max;
  p.k = k;
  p.s = s;
  p.method = method;
  p.fft_size = static_cast<std::int64_t>(next_pow2(static_cast<std::size_t>((s + 1) * n_max + 1)));
  return p;
}

namespace {

std::vector<std::int64_t> kth_powers_upto(int k, std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = 1;; ++x) {
    __int128 v = 1;
    for (int i = 0; i < k && v <= limit; ++i) v *= x;
    if (v > limit) break;
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

// ---- number-theoretic transform ----

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<std::uint64_t>& a, bool invert, std::uint64_t mod, std::uint64_t root) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = powmod_u(root, (mod - 1) / len, mod);
    if (invert) w = powmod_u(w, mod - 2, mod);
    for (std::size_t i = 0; i < n; i += len) {
      std::uint64_t wn = 1;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = mulmod(a[i + j + len / 2], wn, mod);
        a[i + j] = u + v < mod ? u + v : u + v - mod;
        a[i + j + len / 2] = u >= v ? u - v : u + mod - v;
        wn = mulmod(wn, w, mod);
      }
    }
  }
  if (invert) {
    const std::uint64_t inv_n = powmod_u(n, mod - 2, mod);
    for (auto& x : a) x = mulmod(x, inv_n, mod);
  }
}

std::vector<std::uint64_t> ntt_mod(std::span<const std::int64_t> a, std::span<const std::int64_t> b, std::size_t size,
                                   std::uint64_t mod) {
  std::vector<std::uint64_t> fa(size, 0), fb(size, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = static_cast<std::uint64_t>(a[i]) % mod;
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = static_cast<std::uint64_t>(b[i]) % mod;
  ntt(fa, false, mod, 3);
  ntt(fb, false, mod, 3);
  for (std::size_t i = 0; i < size; ++i) fa[i] = mulmod(fa[i], fb[i], mod);
  ntt(fa, true, mod, 3);
  return fa;
}

std::vector<std::int64_t> schoolbook(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                     std::size_t keep) {
  std::vector<std::int64_t> out(keep, 0);
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < b.size() && j < keep; ++j)
    if (b[j] != 0) nz.push_back(j);
  for (std::size_t i = 0; i < a.size() && i < keep; ++i) {
    if (a[i] == 0) continue;
    for (auto j : nz) {
      if (i + j >= keep) break;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

struct Convolver {
  ConvolutionMethod method;
  CountResult* res;

  std::vector<std::int64_t> operator()(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                       std::size_t keep) const {
    switch (method) {
      case ConvolutionMethod::direct:
        res->used = ConvolutionMethod::direct;
        return schoolbook(a, b, keep);
      case ConvolutionMethod::integer_safe:
        res->used = ConvolutionMethod::integer_safe;
        return ntt_convolve(a, b, keep);
      case ConvolutionMethod::automatic:
      case ConvolutionMethod::float_fft_verified: {
        double residue = 0.0;
        auto out = float_convolve_verified(a, b, keep, &residue);
        res->max_residue = std::max(res->max_residue, residue);
        if (out) {
          if (res->used != ConvolutionMethod::integer_safe) res->used = ConvolutionMethod::float_fft_verified;
          return std::move(*out);
        }
        res->fell_back = true;
        res->used = ConvolutionMethod::integer_safe;
        return ntt_convolve(a, b, keep);
      }
    }
    throw InternalError("unhandled convolution method");
  }
};

}  // namespace

std::vector<std::int64_t> ntt_convolve(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                       std::size_t keep) {
  if (a.empty() || b.empty() || keep == 0) return std::vector<std::int64_t>(keep, 0);
  for (auto v : a)
    if (v < 0) throw DomainError("integer-safe convolution needs nonnegative input");
  for (auto v : b)
    if (v < 0) throw DomainError("integer-safe convolution needs nonnegative input");
  const std::size_t size = next_pow2(a.size() + b.size() - 1);
  if (size > (std::size_t{1} << 23)) throw ResourceError("integer-safe convolution longer than 2^23");
  constexpr std::uint64_t m1 = 998244353, m2 = 167772161, m3 = 469762049;
  auto r1 = ntt_mod(a, b, size, m1);
  auto r2 = ntt_mod(a, b, size, m2);
  auto r3 = ntt_mod(a, b, size, m3);
  const std::uint64_t inv_m1_m2 = powmod_u(m1 % m2, m2 - 2, m2);
  const unsigned __int128 m12 = static_cast<unsigned __int128>(m1) * m2;
  const std::uint64_t inv_m12_m3 = powmod_u(static_cast<std::uint64_t>(m12 % m3), m3 - 2, m3);
  std::vector<std::int64_t> out(keep, 0);
  for (std::size_t i = 0; i < keep && i < size; ++i) {
    const std::uint64_t t1 = mulmod((r2[i] + m2 - r1[i] % m2) % m2, inv_m1_m2, m2);
    const unsigned __int128 x12 = r1[i] + static_cast<unsigned __int128>(m1) * t1;
    const std::uint64_t x12_m3 = static_cast<std::uint64_t>(x12 % m3);
    const std::uint64_t t2 = mulmod((r3[i] + m3 - x12_m3) % m3, inv_m12_m3, m3);
    const unsigned __int128 x = x12 + m12 * t2;
    if (x > static_cast<unsigned __int128>(INT64_MAX)) throw ResourceError("convolution entry exceeds 63 bits");
    out[i] = static_cast<std::int64_t>(x);
  }
  return out;
}

std::optional<std::vector<std::int64_t>> float_convolve_verified(std::span<const std::int64_t> a,
                                                                 std::span<const std::int64_t> b, std::size_t keep,
                                                                 double* max_residue) {
  if (max_residue) *max_residue = 0.0;
  if (a.empty() || b.empty() || keep == 0) return std::vector<std::int64_t>(keep, 0);
  std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
  // a-priori l2 error bound; a small residue alone cannot rule out an error near 1
  double na = 0, nb = 0;
  for (double v : da) na += v * v;
  for (double v : db) nb += v * v;
  const double len = static_cast<double>(next_pow2(a.size() + b.size()));
  const double bound = std::sqrt(na * nb) * 1e-16 * 8.0 * std::log2(len);
  auto c = convolve_real(da, db);
  std::vector<std::int64_t> out(keep, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < keep && i < c.size(); ++i) {
    if (std::abs(c[i]) >= 4503599627370496.0) return std::nullopt;
    const double r = std::nearbyint(c[i]);
    worst = std::max(worst, std::abs(c[i] - r));
    out[i] = static_cast<std::int64_t>(r);
  }
  if (max_residue) *max_residue = worst;
  if (worst >= 0.25 || bound >= 0.25) return std::nullopt;
  return out;
}

CountResult power_counts(int k, int s, std::int64_t n_max, ConvolutionMethod method, const ResourceBudget& budget) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (s < 0) throw DomainError("s must be >= 0");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  budget.require(static_cast<std::size_t>(n_max + 1) * sizeof(double) * 8, "power convolution");
  const auto keep = static_cast<std::size_t>(n_max + 1);
  std::vector<std::int64_t> A(keep, 0);
  for (auto v : kth_powers_upto(k, n_max)) A[static_cast<std::size_t>(v)] = 1;
  CountResult res;
  res.used = method == ConvolutionMethod::automatic ? ConvolutionMethod::float_fft_verified : method;
  Convolver conv{method, &res};
  std::vector<std::int64_t> acc(keep, 0);
  acc[0] = 1;
  for (int i = 0; i < s; ++i) acc = conv(acc, A, keep);
  res.r = std::move(acc);
  return res;
}

CountResult count_range(int k, int s, std::int64_t n_max, const ConvolutionPlan& plan, const ResourceBudget& budget) {
  if (plan.k != k || plan.s != s || plan.n_max < n_max || plan.fft_size <= (s + 1) * n_max) {
    throw DomainError("convolution plan does not cover (k, s, n_max)");
  }
  auto res = power_counts(k, s, n_max, plan.method, budget);
  const auto keep = static_cast<std::size_t>(n_max + 1);
  std::vector<std::int64_t> primes(keep, 0);
  if (n_max >= 2) {
    auto ind = prime_indicator(n_max, budget);
    for (std::size_t i = 0; i < keep; ++i) primes[i] = ind[i];
  }
  Convolver conv{plan.method, &res};
  res.r = conv(res.r, primes, keep);
  return res;
}

std::int64_t count_direct(int k, int s, std::int64_t n, const ResourceBudget& budget) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (s < 0) throw DomainError("s must be >= 0");
  if (n < 2) return 0;
  auto powers = kth_powers_upto(k, n);
  const double tuples = std::pow(static_cast<double>(powers.size()), s);
  if (tuples > 4e9) throw ResourceError("direct enumeration would visit ~" + std::to_string(tuples) + " tuples");
  auto is_p = prime_indicator(n, budget);
  std::int64_t count = 0;
  auto rec = [&](auto&& self, int depth, std::int64_t rest) -> void {
    if (depth == s) {
      if (rest >= 2 && is_p[static_cast<std::size_t>(rest)]) ++count;
      return;
    }
    for (auto v : powers) {
      if (rest - v < 2) break;
      self(self, depth + 1, rest - v);
    }
  };
  rec(rec, 0, n);
  return count;
}

std::int64_t count_conjugate(int k, int s, std::int64_t N, const ResourceBudget& budget) {
  if (N < 2) return 0;
  auto res = power_counts(k, s, N, ConvolutionMethod::automatic, budget);
  auto ind = prime_indicator(N, budget);
  std::int64_t total = 0;
  for (std::int64_t p = 2; p <= N; ++p)
    if (ind[static_cast<std::size_t>(p)]) total += res.r[static_cast<std::size_t>(p)];
  return total;
}

double hl_gamma_factor(int k, int s) {
  if (k < 1 || s < 0) throw DomainError("need k >= 1, s >= 0");
  return std::pow(std::tgamma(1.0 + 1.0 / k), s) / std::tgamma(1.0 + static_cast<double>(s) / k);
}

double hl_prediction(int k, int s, std::int64_t n, double series_value) {
  if (n < 2) throw DomainError("prediction needs n >= 2");
  const double nd = static_cast<double>(n);
  return series_value * hl_gamma_factor(k, s) * std::pow(nd, static_cast<double>(s) / k) / std::log(nd);
}

CompareReport compare_report(int k, int s, std::int64_t n_lo, std::int64_t n_hi, std::int64_t stride,
                             std::int64_t prime_cutoff, const ResourceBudget& budget) {
  if (n_lo < 2 || n_hi < n_lo) throw DomainError("compare needs 2 <= n_lo <= n_hi");
  if (stride < 1) throw DomainError("stride must be >= 1");
  if (s < 1) throw DomainError("compare needs s >= 1");
  CompareReport rep;
  rep.k = k;
  rep.s = s;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  rep.stride = stride;
  rep.prime_cutoff = prime_cutoff;
  auto counts = count_range(k, s, n_hi, ConvolutionPlan::make(k, s, n_hi), budget);
  rep.method = counts.used;
  LocalDensityTable table(k, s, prime_cutoff, budget);
  double ratio_sum = 0.0;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.min_order_ratio = std::numeric_limits<double>::infinity();
  for (std::int64_t n = n_lo; n <= n_hi; n += stride) {
    CountRow row;
    row.n = n;
    row.r = counts.r[static_cast<std::size_t>(n)];
    row.series_value = table.product(n);
    row.prediction = hl_prediction(k, s, n, row.series_value);
    row.ratio = row.prediction > 0 ? static_cast<double>(row.r) / row.prediction : 0.0;
    const double order = std::pow(static_cast<double>(n), static_cast<double>(s) / k) / std::log(static_cast<double>(n));
    rep.min_order_ratio = std::min(rep.min_order_ratio, static_cast<double>(row.r) / order);
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    ratio_sum += row.ratio;
    if (row.r == 0) {
      ++rep.zero_count;
      rep.zero_ns.push_back(n);
    }
    rep.total_r += row.r;
    rep.total_prediction += row.prediction;
    rep.rows.push_back(row);
  }
  rep.mean_ratio = ratio_sum / static_cast<double>(rep.rows.size());
  return rep;
}

}  // namespace circlekit
