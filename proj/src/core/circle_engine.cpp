#include "circle_engine.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <limits>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"
#include "special_functions.hpp"

namespace circlekit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::int64_t checked_pow(std::int64_t base, int k) {
  __int128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::int64_t>::max()) throw DomainError("power overflows 64 bits");
  }
  return static_cast<std::int64_t>(r);
}

bool pow_le(std::int64_t base, int k, std::int64_t n) {
  __int128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= base;
    if (r > n) return false;
  }
  return true;
}

std::int64_t clamp_r(std::int64_t R, std::int64_t P) {
  if (R < 1) throw DomainError("R must be >= 1");
  return std::max<std::int64_t>(1, std::min(R, P));
}

Complex unit(double turns) {
  const double frac = turns - std::floor(turns);
  return std::polar(1.0, kTwoPi * frac);
}

}  // namespace

std::int64_t integer_root(std::int64_t n, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (n < 1) return 0;
  auto P = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / k)));
  while (P > 0 && !pow_le(P, k, n)) --P;
  while (pow_le(P + 1, k, n)) ++P;
  return P;
}

double real_root(std::int64_t n, int k) { return std::pow(static_cast<double>(n), 1.0 / k); }

std::int64_t smooth_bound(std::int64_t P, double exponent) {
  if (P < 1) throw DomainError("P must be >= 1");
  if (!(exponent > 0) || exponent > 1) throw DomainError("smoothness exponent must lie in (0, 1]");
  const double v = std::pow(static_cast<double>(P), exponent);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(v + 1e-9)));
}

ExponentialSumSpectrum build_f_spectrum_p(std::int64_t P, int k, std::int64_t R, const ResourceBudget& budget) {
  if (P < 1) throw DomainError("P must be >= 1");
  const std::int64_t top = checked_pow(P, k);
  budget.require(static_cast<std::size_t>(top + 1) * sizeof(double), "f spectrum");
  auto set = smooth_set(P, clamp_r(R, P), budget);
  ExponentialSumSpectrum spec;
  spec.max_freq = top;
  spec.coeffs.assign(static_cast<std::size_t>(top + 1), 0.0);
  for (auto x : set.members) spec.coeffs[static_cast<std::size_t>(checked_pow(x, k))] = 1.0;
  return spec;
}

ExponentialSumSpectrum build_f_spectrum(std::int64_t n, int k, std::int64_t R, const ResourceBudget& budget) {
  if (n < 2) throw DomainError("n must be >= 2");
  const std::int64_t P = integer_root(n, k);
  auto spec = build_f_spectrum_p(P, k, R, budget);
  spec.coeffs.resize(static_cast<std::size_t>(n + 1), 0.0);
  spec.max_freq = n;
  return spec;
}

ExponentialSumSpectrum build_g_spectrum(std::int64_t n, const ResourceBudget& budget) {
  if (n < 2) throw DomainError("n must be >= 2");
  budget.require(static_cast<std::size_t>(n + 1) * sizeof(double), "g spectrum");
  auto primes = sieve_primes(n, budget);
  ExponentialSumSpectrum spec;
  spec.max_freq = n;
  spec.coeffs.assign(static_cast<std::size_t>(n + 1), 0.0);
  auto logs = primes.log_weights();
  auto ps = primes.primes();
  for (std::size_t i = 0; i < ps.size(); ++i) spec.coeffs[static_cast<std::size_t>(ps[i])] = logs[i];
  return spec;
}

GridSpec GridSpec::for_bandwidth(std::int64_t bandwidth, int oversample) {
  if (bandwidth < 0) throw DomainError("bandwidth must be >= 0");
  if (oversample < 1) throw DomainError("oversample must be >= 1");
  GridSpec g;
  g.oversample = oversample;
  g.size = static_cast<std::int64_t>(next_pow2(static_cast<std::size_t>(bandwidth) + 1) *
                                     next_pow2(static_cast<std::size_t>(oversample)));
  return g;
}

std::vector<Complex> evaluate_on_grid(const ExponentialSumSpectrum& spec, const GridSpec& grid, bool allow_aliasing,
                                      const ResourceBudget& budget) {
  const std::int64_t M = grid.size;
  if (M < 1) throw DomainError("grid size must be >= 1");
  if (M <= spec.max_freq && !allow_aliasing) {
    throw AliasingError("grid size " + std::to_string(M) + " does not exceed max frequency " +
                        std::to_string(spec.max_freq));
  }
  budget.require(static_cast<std::size_t>(M) * sizeof(Complex) * 3, "grid evaluation");
  std::vector<Complex> buf(static_cast<std::size_t>(M), Complex{0.0, 0.0});
  for (std::size_t m = 0; m < spec.coeffs.size(); ++m)
    if (spec.coeffs[m] != 0.0) buf[m % static_cast<std::size_t>(M)] += spec.coeffs[m];
  return dft_positive(buf);
}

// ---- arcs -------------------------------------------------------------------

std::string to_string(ArcLabel label) {
  switch (label) {
    case ArcLabel::major: return "M";
    case ArcLabel::N: return "N";
    case ArcLabel::L: return "L";
    case ArcLabel::K: return "K";
    case ArcLabel::Kprime: return "Kprime";
    case ArcLabel::P_slice: return "P_slice";
    case ArcLabel::complement: return "complement";
    case ArcLabel::level_set: return "level_set";
  }
  return "unknown";
}

ArcUnion::ArcUnion(ArcLabel label, std::string name, ArcParams params, std::vector<FareyArc> arcs,
                   std::vector<Interval> intervals)
    : label_(label), name_(std::move(name)), params_(params), arcs_(std::move(arcs)), intervals_(std::move(intervals)) {
  std::sort(arcs_.begin(), arcs_.end(),
            [](const FareyArc& x, const FareyArc& y) { return x.a * y.q < y.a * x.q; });
  // neighbouring arcs must not meet: hw_i + hw_j < (a_j q_i - a_i q_j) / (q_i q_j)
  for (std::size_t i = 1; i < arcs_.size(); ++i) {
    const auto& x = arcs_[i - 1];
    const auto& y = arcs_[i];
    const long double num = static_cast<long double>(y.a * x.q - x.a * y.q);
    const long double lhs = (static_cast<long double>(x.half_width) + y.half_width) * x.q * y.q;
    if (!(lhs < num)) {
      disjoint_ = false;
      break;
    }
  }
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    const auto& x = intervals_[i - 1];
    const auto& y = intervals_[i];
    if (x.hi > y.lo || (x.hi == y.lo && x.hi_closed && y.lo_closed)) disjoint_ = false;
  }
}

ArcUnion ArcUnion::full_circle() {
  return ArcUnion(ArcLabel::complement, "[0,1]", {}, {}, {Interval{0.0, 1.0, true, true}});
}

double ArcUnion::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

bool ArcUnion::contains(double x) const {
  if (x < 0.0 || x > 1.0 || intervals_.empty()) return false;
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  const Interval& iv = *(it - 1);
  const bool lo_ok = x > iv.lo || (x == iv.lo && iv.lo_closed);
  const bool hi_ok = x < iv.hi || (x == iv.hi && iv.hi_closed);
  return lo_ok && hi_ok;
}

std::size_t ArcUnion::endpoint_count() const { return 2 * intervals_.size(); }

std::optional<FareyArc> ArcUnion::locate(double alpha) const {
  if (arcs_.empty()) return std::nullopt;
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), alpha,
                             [](const FareyArc& arc, double v) { return arc.center() < v; });
  for (auto cand : {it, it == arcs_.begin() ? arcs_.end() : it - 1}) {
    if (cand == arcs_.end()) continue;
    if (std::abs(alpha - cand->center()) <= cand->half_width) return *cand;
  }
  return std::nullopt;
}

std::vector<std::int64_t> ArcUnion::grid_indices(std::int64_t M) const {
  std::vector<std::int64_t> out;
  const long double m = static_cast<long double>(M);
  for (const auto& iv : intervals_) {
    const long double lo = iv.lo * m;
    const long double hi = iv.hi * m;
    auto j0 = static_cast<std::int64_t>(std::ceil(lo));
    auto j1 = static_cast<std::int64_t>(std::floor(hi));
    if (!iv.lo_closed && static_cast<long double>(j0) == lo) ++j0;
    if (!iv.hi_closed && static_cast<long double>(j1) == hi) --j1;
    j0 = std::max<std::int64_t>(j0, 0);
    j1 = std::min<std::int64_t>(j1, M - 1);
    for (std::int64_t j = j0; j <= j1; ++j)
      if (out.empty() || out.back() < j) out.push_back(j);
  }
  return out;
}

template <class Op>
ArcUnion ArcUnion::combine(const ArcUnion& other, Op op, std::string name) const {
  std::vector<double> pts{0.0, 1.0};
  for (const auto* u : {this, &other})
    for (const auto& iv : u->intervals_) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto member = [&](double x) { return op(contains(x), other.contains(x)); };
  std::vector<Interval> out;
  Interval cur;
  bool open = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (member(pts[i])) {
      if (!open) {
        cur.lo = pts[i];
        cur.lo_closed = true;
        open = true;
      }
    } else if (open) {
      cur.hi = pts[i];
      cur.hi_closed = false;
      out.push_back(cur);
      open = false;
    }
    if (i + 1 == pts.size()) break;
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (member(mid)) {
      if (!open) {
        cur.lo = pts[i];
        cur.lo_closed = false;
        open = true;
      }
    } else if (open) {
      cur.hi = pts[i];
      cur.hi_closed = true;
      out.push_back(cur);
      open = false;
    }
  }
  if (open) {
    cur.hi = pts.back();
    cur.hi_closed = true;
    out.push_back(cur);
  }
  return ArcUnion(ArcLabel::complement, std::move(name), params_, {}, std::move(out));
}

ArcUnion ArcUnion::complement(std::string name) const {
  ArcUnion u = full_circle().combine(*this, [](bool a, bool b) { return a && !b; },
                                     name.empty() ? "[0,1]\\" + name_ : std::move(name));
  return u;
}

ArcUnion ArcUnion::intersect(const ArcUnion& other, std::string name) const {
  ArcUnion u = combine(other, [](bool a, bool b) { return a && b; },
                       name.empty() ? name_ + "&" + other.name_ : std::move(name));
  u.label_ = ArcLabel::level_set;
  return u;
}

ArcUnion ArcUnion::unite(const ArcUnion& other, std::string name) const {
  return combine(other, [](bool a, bool b) { return a || b; },
                 name.empty() ? name_ + "|" + other.name_ : std::move(name));
}

ArcUnion ArcUnion::minus(const ArcUnion& other, std::string name) const {
  return combine(other, [](bool a, bool b) { return a && !b; },
                 name.empty() ? name_ + "\\" + other.name_ : std::move(name));
}

namespace {

ArcUnion arcs_to_union(ArcLabel label, std::string name, ArcParams params, std::vector<FareyArc> arcs) {
  std::sort(arcs.begin(), arcs.end(), [](const FareyArc& x, const FareyArc& y) { return x.a * y.q < y.a * x.q; });
  std::vector<Interval> ivs;
  ivs.reserve(arcs.size());
  for (const auto& arc : arcs) {
    const double c = arc.center();
    ivs.push_back({std::max(0.0, c - arc.half_width), std::min(1.0, c + arc.half_width), true, true});
  }
  ArcUnion u(label, std::move(name), params, std::move(arcs), std::move(ivs));
  if (!u.disjoint()) throw ConsistencyError("arcs of " + u.name() + " overlap");
  return u;
}

std::vector<FareyArc> farey_arcs(std::int64_t qmax, const ResourceBudget& budget,
                                 const std::function<double(std::int64_t)>& half_width) {
  // roughly 3 qmax^2 / pi^2 fractions
  budget.require(static_cast<std::size_t>(qmax + 1) * static_cast<std::size_t>(qmax + 1) * sizeof(FareyArc) / 2,
                 "Farey arc list");
  std::vector<FareyArc> arcs;
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const double hw = half_width(q);
    for (std::int64_t a = 0; a <= q; ++a)
      if (gcd64(a, q) == 1) arcs.push_back({q, a, hw});
  }
  return arcs;
}

}  // namespace

ArcUnion major_arcs(double Q, double X, ArcLabel label, std::string name) {
  if (!(X > 0)) throw DomainError("major arc scale must be positive");
  if (!(Q >= 0)) throw DomainError("Q must be >= 0");
  if (Q > 0.5 * std::sqrt(X) * (1 + 1e-12)) {
    throw DomainError("Q = " + fmt_g(Q) + " exceeds sqrt(X)/2 = " + fmt_g(0.5 * std::sqrt(X)) +
                      "; the arcs would overlap");
  }
  const auto qmax = static_cast<std::int64_t>(std::floor(Q));
  auto arcs = farey_arcs(qmax, ResourceBudget{}, [&](std::int64_t q) { return Q / (static_cast<double>(q) * X); });
  ArcParams params;
  params.Q = Q;
  params.X = X;
  return arcs_to_union(label, name.empty() ? "M(" + fmt_g(Q) + ")" : std::move(name), params, std::move(arcs));
}

ArcUnion build_major(std::int64_t n, double Q) {
  auto u = major_arcs(Q, static_cast<double>(n));
  ArcParams p = u.params();
  p.n = n;
  return ArcUnion(u.label(), u.name(), p, {u.arcs().begin(), u.arcs().end()},
                  {u.intervals().begin(), u.intervals().end()});
}

namespace {

ArcUnion with_n(ArcUnion u, std::int64_t n, double P) {
  ArcParams p = u.params();
  p.n = n;
  p.P = P;
  return ArcUnion(u.label(), u.name(), p, {u.arcs().begin(), u.arcs().end()},
                  {u.intervals().begin(), u.intervals().end()});
}

}  // namespace

ArcUnion build_n_arcs(std::int64_t n, int k, const DissectionConfig& cfg) {
  if (n < 3) throw DomainError("N arcs need n >= 3");
  const double qn = std::pow(std::log(static_cast<double>(n)), cfg.n_height_exponent);
  const auto qmax = static_cast<std::int64_t>(std::floor(qn));
  const double hw = qn / static_cast<double>(n);
  auto arcs = farey_arcs(qmax, ResourceBudget{}, [&](std::int64_t) { return hw; });
  ArcParams params;
  params.n = n;
  params.P = real_root(n, k);
  params.Q = qn;
  params.X = static_cast<double>(n);
  return arcs_to_union(ArcLabel::N, "N", params, std::move(arcs));
}

ArcUnion build_l_arcs(std::int64_t n, int k, const DissectionConfig& cfg) {
  const double P = real_root(n, k);
  return with_n(major_arcs(std::pow(P, cfg.l_height_exponent), static_cast<double>(n), ArcLabel::L, "L"), n, P);
}

ArcUnion build_k_arcs(std::int64_t n) {
  return with_n(major_arcs(std::pow(static_cast<double>(n), 0.4), static_cast<double>(n), ArcLabel::K, "K"), n, 0.0);
}

ArcUnion build_kprime_arcs(std::int64_t n) {
  return with_n(major_arcs(0.5 * std::sqrt(static_cast<double>(n)), static_cast<double>(n), ArcLabel::Kprime, "Kprime"),
                n, 0.0);
}

ArcUnion build_slice(std::int64_t n, double Y) {
  auto big = major_arcs(2 * Y, static_cast<double>(n));
  auto small = major_arcs(Y, static_cast<double>(n));
  auto d = big.minus(small, "P(" + fmt_g(Y) + ")");
  ArcParams p;
  p.n = n;
  p.Q = Y;
  p.X = static_cast<double>(n);
  return ArcUnion(ArcLabel::P_slice, d.name(), p, {}, {d.intervals().begin(), d.intervals().end()});
}

double upsilon(double alpha, std::int64_t n) {
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("upsilon needs alpha in [0,1]");
  const double qcap = 0.5 * std::sqrt(static_cast<double>(n));
  const auto N = static_cast<std::int64_t>(std::floor(qcap));
  if (N < 1) return 0.0;
  const long double x = alpha;
  // a/b <= alpha <= c/d, Farey neighbours of order N
  std::int64_t a = 0, b = 1, c = 1, d = 1;
  for (;;) {
    if (b + d > N) break;
    const long double ma = static_cast<long double>(a + c);
    if (ma <= x * static_cast<long double>(b + d)) {
      const long double den = static_cast<long double>(c) - x * d;
      std::int64_t k = (N - b) / d;
      if (den > 0) k = std::min<std::int64_t>(k, static_cast<std::int64_t>(std::floor((x * b - a) / den)));
      k = std::max<std::int64_t>(k, 1);
      while (k > 1 && static_cast<long double>(a + k * c) > x * static_cast<long double>(b + k * d)) --k;
      a += k * c;
      b += k * d;
    } else {
      const long double den = x * b - static_cast<long double>(a);
      std::int64_t k = (N - d) / b;
      if (den > 0) k = std::min<std::int64_t>(k, static_cast<std::int64_t>(std::floor((c - x * d) / den)));
      k = std::max<std::int64_t>(k, 1);
      while (k > 1 && static_cast<long double>(c + k * a) < x * static_cast<long double>(d + k * b)) --k;
      c += k * a;
      d += k * b;
    }
  }
  const double bound = qcap / static_cast<double>(n);
  double best = 0.0;
  for (auto [num, q] : {std::pair{a, b}, std::pair{c, d}}) {
    const double dist = std::abs(static_cast<double>(q) * alpha - static_cast<double>(num));
    if (dist <= bound) best = std::max(best, 1.0 / (static_cast<double>(q) + static_cast<double>(n) * dist));
  }
  return best;
}

// ---- quadrature ---------------------------------------------------------------

SetIntegral integrate_values(std::span<const std::span<const Complex>> values, std::span<const bool> conjugate,
                             std::int64_t n, const ArcUnion* set, std::int64_t M, std::int64_t bandwidth) {
  if (values.size() != conjugate.size()) throw DomainError("one conjugate flag per spectrum");
  for (auto v : values)
    if (static_cast<std::int64_t>(v.size()) != M) throw DomainError("value array does not match grid size");
  const std::int64_t nm = ((n % M) + M) % M;
  SetIntegral res;
  double sup = 0.0;
  auto visit = [&](std::int64_t j) {
    Complex prod{1.0, 0.0};
    for (std::size_t i = 0; i < values.size(); ++i) prod *= conjugate[i] ? std::conj(values[i][j]) : values[i][j];
    sup = std::max(sup, std::abs(prod));
    const auto idx = static_cast<std::int64_t>((static_cast<__int128>(j) * nm) % M);
    res.value += prod * std::polar(1.0, -kTwoPi * static_cast<double>(idx) / static_cast<double>(M));
    ++res.points;
  };
  if (set == nullptr) {
    for (std::int64_t j = 0; j < M; ++j) visit(j);
  } else {
    for (auto j : set->grid_indices(M)) visit(j);
  }
  res.value /= static_cast<double>(M);
  res.boundary_error = set == nullptr ? 0.0 : static_cast<double>(set->endpoint_count()) * sup / static_cast<double>(M);
  res.exact = set == nullptr && bandwidth >= 0 && M > bandwidth;
  return res;
}

SetIntegral arc_integral(std::int64_t n, int k, int s, std::int64_t R, const ArcUnion* set, int oversample,
                         const ResourceBudget& budget) {
  if (s < 0) throw DomainError("s must be >= 0");
  auto g = build_g_spectrum(n, budget);
  auto f = build_f_spectrum(n, k, R, budget);
  const std::int64_t bw = static_cast<std::int64_t>(s + 1) * n;
  auto grid = GridSpec::for_bandwidth(bw, oversample);
  auto gv = evaluate_on_grid(g, grid, false, budget);
  auto fv = evaluate_on_grid(f, grid, false, budget);
  std::vector<std::span<const Complex>> vals{gv};
  for (int i = 0; i < s; ++i) vals.emplace_back(fv);
  std::unique_ptr<bool[]> conj(new bool[vals.size()]());
  return integrate_values(vals, std::span<const bool>(conj.get(), vals.size()), n, set, grid.size, bw);
}

double arc_integral_oracle(std::int64_t n, int k, int s, std::int64_t R) {
  const std::int64_t P = integer_root(n, k);
  std::vector<std::int64_t> powers;
  if (P >= 1)
    for (auto x : smooth_set(P, clamp_r(R, P)).members) powers.push_back(checked_pow(x, k));
  double total = 0.0;
  auto rec = [&](auto&& self, int depth, std::int64_t sum) -> void {
    if (depth == s) {
      const std::int64_t p = n - sum;
      if (p >= 2 && is_prime_trial(p)) total += std::log(static_cast<double>(p));
      return;
    }
    for (auto v : powers) {
      if (sum + v > n - 2) break;
      self(self, depth + 1, sum + v);
    }
  };
  rec(rec, 0, 0);
  return total;
}

VPoly::VPoly(std::int64_t n, int k) : n_(n), k_(k) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (n < 1) throw DomainError("n must be >= 1");
  w_.assign(static_cast<std::size_t>(n + 1), 0.0);
  for (std::int64_t m = 1; m <= n; ++m) w_[m] = std::pow(static_cast<double>(m), -1.0 + 1.0 / k) / k;
}

Complex VPoly::operator()(double beta) const {
  if (k_ == 1) {
    const double sb = std::sin(std::numbers::pi * beta);
    if (std::abs(sb) > 1e-9) {
      const double sn = std::sin(std::numbers::pi * beta * static_cast<double>(n_));
      return unit(beta * static_cast<double>(n_ + 1) / 2.0) * (sn / sb);
    }
  }
  constexpr std::int64_t block = 128;
  const Complex step = unit(beta);
  Complex acc{0.0, 0.0};
  for (std::int64_t m0 = 1; m0 <= n_; m0 += block) {
    Complex cur = unit(beta * static_cast<double>(m0));
    const std::int64_t m1 = std::min(n_, m0 + block - 1);
    for (std::int64_t m = m0; m <= m1; ++m) {
      acc += w_[m] * cur;
      cur *= step;
    }
  }
  return acc;
}

Complex v_poly(double beta, std::int64_t n, int k) { return VPoly(n, k)(beta); }

double singular_integral_spectral(std::int64_t n, int k, int s, double X) {
  VPoly vk(n, k);
  std::vector<double> acc{1.0};
  for (int i = 0; i < s; ++i) acc = convolve_real(acc, vk.weights());
  std::vector<double> box(static_cast<std::size_t>(n + 1), 1.0);
  box[0] = 0.0;
  auto w = convolve_real(acc, box);
  const double B = X / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (w[m] == 0.0) continue;
    const double j = static_cast<double>(static_cast<std::int64_t>(m) - n);
    const double kern = j == 0.0 ? 2.0 * B : std::sin(kTwoPi * j * B) / (std::numbers::pi * j);
    total += w[m] * kern;
  }
  return total;
}

SingularIntegral singular_integral(std::int64_t n, int k, int s, double X, bool with_spectral) {
  if (s < 0) throw DomainError("s must be >= 0");
  if (!(X >= 1.0) || X > static_cast<double>(n) / 2.0) throw DomainError("singular integral needs 1 <= X <= n/2");
  VPoly v1(n, 1);
  VPoly vk(n, k);
  auto integrand = [&](double beta) {
    Complex val = v1(beta) * std::pow(vk(beta), s) * unit(-beta * static_cast<double>(n));
    return val.real();
  };
  const double B = X / static_cast<double>(n);
  const auto pieces = static_cast<int>(std::max(1.0, std::ceil(4.0 * X)));
  const double width = B / pieces;
  SingularIntegral res;
  for (int i = 0; i < pieces; ++i) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, i * width, (i + 1) * width, 6, 1e-9, &err);
    if (!std::isfinite(v) || !std::isfinite(err)) throw ConvergenceError("singular integral quadrature diverged");
    res.value += 2.0 * v;
    res.error_estimate += 2.0 * err;
  }
  const double scale = std::pow(static_cast<double>(n), static_cast<double>(s) / k);
  if (res.error_estimate > 1e-6 * std::max(std::abs(res.value), scale)) {
    throw ConvergenceError("singular integral error estimate " + fmt_g(res.error_estimate) + " too large");
  }
  if (with_spectral) res.spectral_value = singular_integral_spectral(n, k, s, X);
  return res;
}

ModelErrorReport major_arc_model_error(std::int64_t n, int k, std::int64_t R, const ArcUnion& n_arcs, int oversample,
                                       const ResourceBudget& budget) {
  ModelErrorReport rep;
  rep.n = n;
  rep.k = k;
  rep.P = integer_root(n, k);
  rep.R = clamp_r(R, rep.P);
  rep.n_height = n_arcs.params().Q;
  auto f = build_f_spectrum(n, k, rep.R, budget);
  double count = 0.0;
  for (double c : f.coeffs) count += c;
  rep.rho_hat = count / static_cast<double>(rep.P);
  auto grid = GridSpec::for_bandwidth(n, oversample);
  auto fv = evaluate_on_grid(f, grid, false, budget);
  VPoly vk(n, k);
  for (auto j : n_arcs.grid_indices(grid.size)) {
    const double alpha = grid.point(j);
    auto arc = n_arcs.locate(alpha);
    if (!arc) continue;
    const Complex S = gauss_sum(arc->q, arc->a % arc->q, k);
    const Complex model = rep.rho_hat / static_cast<double>(arc->q) * S * vk(alpha - arc->center());
    rep.sup_error = std::max(rep.sup_error, std::abs(fv[j] - model));
    ++rep.points;
  }
  rep.normalized = rep.sup_error / real_root(n, k);
  return rep;
}

MomentReport moment_V(std::int64_t P, std::int64_t R, std::span<const double> qs, double t, int k, int oversample,
                      const ResourceBudget& budget) {
  if (!(t > 0)) throw DomainError("moment order t must be positive");
  MomentReport rep;
  rep.P = P;
  rep.k = k;
  rep.t = t;
  auto f = build_f_spectrum_p(P, k, R, budget);
  rep.R = clamp_r(R, P);
  for (double c : f.coeffs) rep.f0 += c;
  const double X = static_cast<double>(f.max_freq);
  auto grid = GridSpec::for_bandwidth(f.max_freq, oversample);
  rep.grid_size = grid.size;
  auto fv = evaluate_on_grid(f, grid, false, budget);
  std::vector<double> powt(fv.size());
  for (std::size_t j = 0; j < fv.size(); ++j) {
    powt[j] = std::pow(std::abs(fv[j]), t);
    rep.full_circle += powt[j];
  }
  rep.full_circle /= static_cast<double>(grid.size);
  rep.reference_slope = 2.0 * eta(t / k).eta;
  rep.below_bound_range = t < k + 1;
  for (double Q : qs) {
    if (Q < 1.0) throw DomainError("moment Q must be >= 1");
    auto arcs = major_arcs(Q, X);
    MomentRow row;
    row.Q = Q;
    row.measure = arcs.measure();
    double sup = 0.0;
    for (auto j : arcs.grid_indices(grid.size)) {
      row.value += powt[j];
      sup = std::max(sup, powt[j]);
      ++row.points;
    }
    row.value /= static_cast<double>(grid.size);
    row.boundary_error = static_cast<double>(arcs.endpoint_count()) * sup / static_cast<double>(grid.size);
    rep.rows.push_back(row);
  }
  for (auto& row : rep.rows)
    for (const auto& other : rep.rows)
      if (std::abs(other.Q - 2 * row.Q) <= 1e-9 * row.Q && row.value > 0 && other.value > 0)
        row.doubling_slope = std::log2(other.value / row.value);
  return rep;
}

// ---- level sets -----------------------------------------------------------------

namespace {

LevelPartition classify(const LevelInputs& in, const ArcUnion& base, std::string base_name, double bottom,
                        double split_log_power, const char* bottom_label, const char* low_label,
                        const char* high_label, const char* param, double param_scale, double range_lo) {
  LevelPartition part;
  part.base = std::move(base_name);
  part.base_measure = base.measure();
  const double L = std::log(static_cast<double>(in.n));
  const double Ps = std::pow(in.P, in.s);
  auto idx = base.grid_indices(in.M);
  const double inv_m = 1.0 / static_cast<double>(in.M);
  part.base_grid_measure = static_cast<double>(idx.size()) * inv_m;

  LevelClass bottom_cls;
  bottom_cls.label = bottom_label;
  std::vector<LevelClass> lows, highs;
  auto ensure = [&](std::int64_t j) {
    while (static_cast<std::int64_t>(lows.size()) <= j) {
      const double th = param_scale / std::ldexp(1.0, static_cast<int>(lows.size()));
      LevelClass lo, hi;
      lo.threshold = hi.threshold = th;
      lo.label = std::string(low_label) + "[" + param + "=" + fmt_g(th) + "]";
      hi.label = std::string(high_label) + "[" + param + "=" + fmt_g(th) + "]";
      lows.push_back(lo);
      highs.push_back(hi);
    }
  };
  for (auto j : idx) {
    const double G = std::abs(in.g[j]);
    const double F = std::abs(in.f[j]);
    const double contrib = G * std::pow(F, in.s) * inv_m;
    LevelClass* cls = nullptr;
    if (G <= bottom) {
      cls = &bottom_cls;
    } else {
      // G in (bottom 2^d, bottom 2^{d+1}], threshold = param_scale / 2^d
      std::int64_t d = 0;
      while (G > bottom * std::ldexp(1.0, static_cast<int>(d + 1))) ++d;
      ensure(d);
      const double th = lows[d].threshold;
      const bool low = std::pow(F, in.s) <= Ps / th * std::pow(L, -split_log_power);
      cls = low ? &lows[d] : &highs[d];
    }
    cls->indices.push_back(j);
    cls->sup_g = std::max(cls->sup_g, G);
    cls->sup_f = std::max(cls->sup_f, F);
    cls->contribution_abs += contrib;
  }
  part.classes.push_back(std::move(bottom_cls));
  for (std::size_t d = 0; d < lows.size(); ++d) {
    if (lows[d].threshold < range_lo) {
      part.warnings.push_back(std::string(param) + " = " + fmt_g(lows[d].threshold) + " below the range start " +
                              fmt_g(range_lo));
    }
    part.classes.push_back(std::move(lows[d]));
    part.classes.push_back(std::move(highs[d]));
  }
  for (auto& c : part.classes) {
    c.measure = static_cast<double>(c.indices.size()) * inv_m;
    part.class_measure_sum += c.measure;
  }
  return part;
}

}  // namespace

LevelPartition size_partition(const LevelInputs& in, const ArcUnion& base, std::string base_name) {
  const double rn = std::sqrt(static_cast<double>(in.n));
  const double L = std::log(static_cast<double>(in.n));
  const double lo = std::pow(static_cast<double>(in.n), 1.0 / in.theta) * std::pow(L, -5.0);
  // n/U = sqrt(n) 2^d  <=>  U = sqrt(n) / 2^d
  return classify(in, base, std::move(base_name), rn, 3.0, "T", "G", "H", "U", rn, lo);
}

LevelPartition height_partition(const LevelInputs& in, const ArcUnion& base, double Q, std::string base_name) {
  const double L = std::log(static_cast<double>(in.n));
  const double bottom = static_cast<double>(in.n) / Q;
  const double lo = std::sqrt(Q) * std::pow(L, -5.0);
  // n/V = (n/Q) 2^d  <=>  V = Q / 2^d
  return classify(in, base, std::move(base_name), bottom, 4.0, "S", "E", "F", "V", Q, lo);
}

std::int64_t count_large_g(const LevelInputs& in, const ArcUnion& base, double U) {
  const double cut = static_cast<double>(in.n) / U;
  std::int64_t c = 0;
  for (auto j : base.grid_indices(in.M))
    if (std::abs(in.g[j]) >= cut) ++c;
  return c;
}

DissectionReport dissect(std::int64_t n, int k, int s, int theta, std::int64_t R, const DissectionConfig& cfg,
                         int oversample, const ResourceBudget& budget) {
  ThetaMode mode(theta);
  DissectionReport rep;
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.theta = mode.value();
  rep.P = integer_root(n, k);
  rep.R = clamp_r(R, rep.P);
  const double Preal = real_root(n, k);
  const double L = std::log(static_cast<double>(n));

  auto g = build_g_spectrum(n, budget);
  auto f = build_f_spectrum(n, k, rep.R, budget);
  auto grid = GridSpec::for_bandwidth(static_cast<std::int64_t>(s + 1) * n, oversample);
  rep.grid_size = grid.size;
  auto gv = evaluate_on_grid(g, grid, false, budget);
  auto fv = evaluate_on_grid(f, grid, false, budget);

  auto N = build_n_arcs(n, k, cfg);
  auto Larcs = build_l_arcs(n, k, cfg);
  auto K = build_k_arcs(n);
  auto Kp = build_kprime_arcs(n);
  const ArcUnion& top = rep.theta == 5 ? K : Kp;
  const double q_top = top.params().Q;
  auto minor = top.complement(rep.theta == 5 ? "k" : "kprime");
  auto l_minus_n = Larcs.minus(N, "L\\N");
  rep.unions = {N, Larcs, K, Kp, minor, l_minus_n};

  LevelInputs in{n, k, s, rep.theta, static_cast<double>(rep.P), grid.size, gv, fv};
  rep.size_ledger = size_partition(in, minor, minor.name());
  rep.partition_defect = std::abs(rep.size_ledger.class_measure_sum - rep.size_ledger.base_grid_measure);

  // heights between L and the top major arcs, in dyadic slices
  double Y = Larcs.params().Q;
  while (Y < q_top) {
    const double Y2 = std::min(2 * Y, q_top);
    auto big = major_arcs(Y2, static_cast<double>(n));
    auto small = major_arcs(Y, static_cast<double>(n));
    auto slice = big.minus(small, Y2 == 2 * Y ? "P(" + fmt_g(Y) + ")" : "M(" + fmt_g(Y2) + ")\\M(" + fmt_g(Y) + ")");
    ArcParams sp;
    sp.n = n;
    sp.Q = Y;
    sp.X = static_cast<double>(n);
    slice = ArcUnion(ArcLabel::P_slice, slice.name(), sp, {}, {slice.intervals().begin(), slice.intervals().end()});
    auto led = height_partition(in, slice, Y, slice.name());
    rep.partition_defect = std::max(rep.partition_defect, std::abs(led.class_measure_sum - led.base_grid_measure));
    rep.height_ledgers.push_back(std::move(led));
    rep.unions.push_back(std::move(slice));
    Y = Y2;
  }

  for (const auto& u : rep.unions) rep.all_disjoint = rep.all_disjoint && u.disjoint();

  const double env = std::pow(static_cast<double>(n), rep.theta == 5 ? 0.8 : 0.75);
  const double L4 = std::pow(L, 4);
  for (auto j : minor.grid_indices(grid.size)) {
    const double G = std::abs(gv[j]);
    rep.sup_g_minor = std::max(rep.sup_g_minor, G);
    const double ups = upsilon(grid.point(j), n);
    rep.c_g_upsilon = std::max(rep.c_g_upsilon, G / ((static_cast<double>(n) * std::sqrt(ups) + env) * L4));
  }
  rep.c_g = rep.sup_g_minor / (env * L4);
  for (auto j : Larcs.grid_indices(grid.size)) {
    const double ups = upsilon(grid.point(j), n);
    if (ups <= 0) continue;
    rep.c_weyl = std::max(rep.c_weyl, std::abs(fv[j]) / (Preal * std::pow(L, 3) * std::pow(ups, 1.0 / (2 * k))));
  }
  return rep;
}

}  // namespace circlekit
