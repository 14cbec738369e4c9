#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "arith_core.hpp"
#include "counting.hpp"
#include "errors.hpp"

using namespace circlekit;

TEST_CASE("direct counts") {
  CHECK(count_direct(2, 2, 10) == 3);
  CHECK(count_direct(2, 1, 2) == 0);
  for (int k = 1; k <= 4; ++k)
    for (int s = 1; s <= 4; ++s) CHECK(count_direct(k, s, s) == 0);
  // p + x^2 = 20: x = 1, 3
  CHECK(count_direct(2, 1, 20) == 2);
  CHECK_THROWS_AS(count_direct(1, 8, 1000000), ResourceError);
}

TEST_CASE("convolution counts match enumeration") {
  for (auto [k, s] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 4}}) {
    auto res = count_range(k, s, 3000);
    REQUIRE(res.r.size() == 3001);
    for (std::int64_t n = 0; n <= 3000; ++n) CHECK(res.r[n] == count_direct(k, s, n));
  }
  CHECK(count_range(2, 2, 10).r[10] == 3);

  for (auto m : {ConvolutionMethod::direct, ConvolutionMethod::float_fft_verified, ConvolutionMethod::integer_safe}) {
    auto res = count_range(2, 3, 2000, ConvolutionPlan::make(2, 3, 2000, m));
    auto ref = count_range(2, 3, 2000, ConvolutionPlan::make(2, 3, 2000, ConvolutionMethod::integer_safe));
    CHECK(res.r == ref.r);
  }
}

TEST_CASE("cumulative count against a double loop") {
  const std::int64_t N = 10000;
  auto res = count_range(2, 2, N);
  const std::int64_t total = std::accumulate(res.r.begin(), res.r.end(), std::int64_t{0});
  auto primes = sieve_primes(N);
  std::int64_t want = 0;
  for (std::int64_t x = 1; x * x < N; ++x)
    for (std::int64_t y = 1; x * x + y * y < N; ++y) want += primes.prime_pi(N - x * x - y * y);
  CHECK(total == want);
}

TEST_CASE("exact convolution") {
  const std::int64_t N = 10000;
  std::vector<std::int64_t> A(N + 1, 0), prime(N + 1, 0);
  for (std::int64_t x = 1; x * x <= N; ++x) A[x * x] = 1;
  auto ind = prime_indicator(N);
  for (std::int64_t i = 0; i <= N; ++i) prime[i] = ind[i];
  auto AA = ntt_convolve(A, A, N + 1);
  auto left = ntt_convolve(AA, prime, N + 1);
  auto Ap = ntt_convolve(A, prime, N + 1);
  auto right = ntt_convolve(A, Ap, N + 1);
  CHECK(left == right);
  CHECK(ntt_convolve(prime, A, N + 1) == Ap);

  auto fl = float_convolve_verified(A, prime, N + 1);
  REQUIRE(fl.has_value());
  CHECK(*fl == Ap);

  // small schoolbook check including values above 2^31
  std::vector<std::int64_t> a{3, 0, 1LL << 33}, b{5, 7};
  CHECK(ntt_convolve(a, b, 4) == std::vector<std::int64_t>{15, 21, 5LL << 33, 7LL << 33});

  std::vector<std::int64_t> big(4096, 1LL << 30);
  CHECK_FALSE(float_convolve_verified(big, big, 8192).has_value());
}

TEST_CASE("float route falls back when rounding is unsafe") {
  auto fl = count_range(1, 4, 20000, ConvolutionPlan::make(1, 4, 20000, ConvolutionMethod::float_fft_verified));
  CHECK(fl.fell_back);
  CHECK(fl.used == ConvolutionMethod::integer_safe);
  auto in = count_range(1, 4, 20000, ConvolutionPlan::make(1, 4, 20000, ConvolutionMethod::integer_safe));
  CHECK(fl.r == in.r);
  auto ok = count_range(2, 2, 20000, ConvolutionPlan::make(2, 2, 20000, ConvolutionMethod::float_fft_verified));
  CHECK_FALSE(ok.fell_back);
  CHECK(ok.max_residue < 0.25);
}

TEST_CASE("plans and method names") {
  auto p = ConvolutionPlan::make(2, 3, 1000);
  CHECK(p.fft_size > 4 * 1000);
  CHECK((p.fft_size & (p.fft_size - 1)) == 0);
  CHECK(convolution_method_from_string("auto") == ConvolutionMethod::automatic);
  CHECK(convolution_method_from_string("float") == ConvolutionMethod::float_fft_verified);
  CHECK(convolution_method_from_string("integer") == ConvolutionMethod::integer_safe);
  CHECK(convolution_method_from_string("direct") == ConvolutionMethod::direct);
  CHECK_THROWS_AS(convolution_method_from_string("fast"), ParseError);
}

TEST_CASE("sums of powers landing on primes") {
  CHECK(count_conjugate(2, 2, 10) == 3);
  for (int s = 1; s <= 4; ++s)
    for (std::int64_t N = 0; N < s; ++N) CHECK(count_conjugate(2, s, N) == 0);
  std::int64_t prev = 0;
  for (std::int64_t N = 0; N <= 300; ++N) {
    auto c = count_conjugate(2, 2, N);
    CHECK(c >= prev);
    prev = c;
  }
  // direct double loop
  auto primes = sieve_primes(5000);
  std::int64_t want = 0;
  for (std::int64_t x = 1; x * x <= 5000; ++x)
    for (std::int64_t y = 1; x * x + y * y <= 5000; ++y)
      if (primes.is_prime(x * x + y * y)) ++want;
  CHECK(count_conjugate(2, 2, 5000) == want);
}

TEST_CASE("prediction constant") {
  CHECK(hl_gamma_factor(1, 1) == doctest::Approx(1.0));
  CHECK(hl_gamma_factor(2, 2) == doctest::Approx(std::pow(std::tgamma(1.5), 2) / std::tgamma(2.0)));
  CHECK(hl_prediction(1, 1, 1000, 0.7) == doctest::Approx(0.7 * 1000 / std::log(1000.0)));
  for (std::int64_t n : {1000, 10000, 100000}) {
    const double base = std::pow(double(n), 4.0 / 3) / std::log(double(n));
    CHECK(hl_prediction(3, 4, n, 0.9) / base == doctest::Approx(0.9 * hl_gamma_factor(3, 4)));
  }
  CHECK(std::string(kHeuristicNote).find("heuristic") != std::string::npos);
}

TEST_CASE("comparison report") {
  auto rep = compare_report(2, 2, 50000, 60000, 50, 2000);
  CHECK(rep.rows.size() == 201);
  std::int64_t tr = 0;
  double tp = 0;
  double mn = 1e300, mean = 0;
  for (const auto& row : rep.rows) {
    tr += row.r;
    tp += row.prediction;
    mn = std::min(mn, row.ratio);
    mean += row.ratio;
    CHECK(row.r == count_direct(2, 2, row.n));
    CHECK(row.ratio == doctest::Approx(row.r / row.prediction));
  }
  mean /= rep.rows.size();
  CHECK(rep.total_r == tr);
  CHECK(rep.total_prediction == doctest::Approx(tp));
  CHECK(rep.min_ratio == doctest::Approx(mn));
  CHECK(rep.mean_ratio == doctest::Approx(mean));
  CHECK(rep.zero_count == 0);
  MESSAGE("mean ratio on the sample " << rep.mean_ratio);
  CHECK(rep.mean_ratio > 0.8);
  CHECK(rep.mean_ratio < 1.2);
  CHECK(rep.note == kHeuristicNote);

  auto small = compare_report(3, 4, 2, 200);
  CHECK(small.zero_count == static_cast<std::int64_t>(small.zero_ns.size()));
  for (auto z : small.zero_ns) CHECK(count_direct(3, 4, z) == 0);
}
