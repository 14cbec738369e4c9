#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arith_core.hpp"
#include "budget.hpp"

namespace circlekit {

// Largest P with P^k <= n.
std::int64_t integer_root(std::int64_t n, int k);
// n^(1/k) as a real.
double real_root(std::int64_t n, int k);
// floor(P^exponent), at least 1
std::int64_t smooth_bound(std::int64_t P, double exponent);

struct ExponentialSumSpectrum {
  std::int64_t max_freq = 0;
  std::vector<double> coeffs;  // index = frequency
};

// Indicator of x^k for x in A(P, R), P = integer_root(n, k).
ExponentialSumSpectrum build_f_spectrum(std::int64_t n, int k, std::int64_t R, const ResourceBudget& budget = {});
// Same for an explicit P; max_freq = P^k.
ExponentialSumSpectrum build_f_spectrum_p(std::int64_t P, int k, std::int64_t R, const ResourceBudget& budget = {});
// log p at primes p <= n.
ExponentialSumSpectrum build_g_spectrum(std::int64_t n, const ResourceBudget& budget = {});

struct GridSpec {
  std::int64_t size = 0;  // M, a power of two
  int oversample = 1;
  // smallest power of two > bandwidth, times oversample (rounded to a power of two)
  static GridSpec for_bandwidth(std::int64_t bandwidth, int oversample = 1);
  double point(std::int64_t j) const { return static_cast<double>(j) / static_cast<double>(size); }
};

// values[j] = sum_m coeffs[m] e(m j / M). Throws AliasingError when M <= max_freq
// unless allow_aliasing is set.
std::vector<Complex> evaluate_on_grid(const ExponentialSumSpectrum& spec, const GridSpec& grid,
                                      bool allow_aliasing = false, const ResourceBudget& budget = {});

// ---- Farey arcs -------------------------------------------------------------

struct FareyArc {
  std::int64_t q = 1;
  std::int64_t a = 0;
  double half_width = 0.0;
  double center() const { return static_cast<double>(a) / static_cast<double>(q); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
};

enum class ArcLabel { major, N, L, K, Kprime, P_slice, complement, level_set };
std::string to_string(ArcLabel label);

struct ArcParams {
  std::int64_t n = 0;
  double P = 0.0;
  double Q = 0.0;  // Q, or the N-height, or Y for slices
  double X = 0.0;  // scale in |q alpha - a| <= Q / X
};

// A finite union of intervals in [0, 1], with the Farey arcs that generated it
// (empty after set algebra).
class ArcUnion {
 public:
  ArcUnion() = default;
  ArcUnion(ArcLabel label, std::string name, ArcParams params, std::vector<FareyArc> arcs,
           std::vector<Interval> intervals);

  static ArcUnion full_circle();

  ArcLabel label() const { return label_; }
  const std::string& name() const { return name_; }
  const ArcParams& params() const { return params_; }
  std::span<const FareyArc> arcs() const { return arcs_; }
  std::span<const Interval> intervals() const { return intervals_; }
  bool disjoint() const { return disjoint_; }

  double measure() const;
  bool contains(double alpha) const;
  std::size_t endpoint_count() const;
  // generating arc whose closed interval holds alpha
  std::optional<FareyArc> locate(double alpha) const;
  // j in [0, M) with j/M in the set
  std::vector<std::int64_t> grid_indices(std::int64_t M) const;

  ArcUnion complement(std::string name = {}) const;
  ArcUnion intersect(const ArcUnion& other, std::string name = {}) const;
  ArcUnion unite(const ArcUnion& other, std::string name = {}) const;
  ArcUnion minus(const ArcUnion& other, std::string name = {}) const;

 private:
  template <class Op>
  ArcUnion combine(const ArcUnion& other, Op op, std::string name) const;

  ArcLabel label_ = ArcLabel::complement;
  std::string name_;
  ArcParams params_;
  std::vector<FareyArc> arcs_;  // sorted by center
  std::vector<Interval> intervals_;
  bool disjoint_ = true;
};

// M(Q) at scale X: arcs |q alpha - a| <= Q / X for 1 <= q <= Q, 0 <= a <= q.
// Requires Q <= sqrt(X)/2; pairwise disjointness is verified on neighbours.
ArcUnion major_arcs(double Q, double X, ArcLabel label = ArcLabel::major, std::string name = {});

struct DissectionConfig {
  double n_height_exponent = 1.0 / 99.0;  // N uses (log n)^this
  double l_height_exponent = 1.0 / 5.0;   // L = M(P^this)
};

// N: |alpha - a/q| <= Qn / n for q <= Qn, Qn = (log n)^(1/99).
ArcUnion build_n_arcs(std::int64_t n, int k, const DissectionConfig& cfg = {});
ArcUnion build_l_arcs(std::int64_t n, int k, const DissectionConfig& cfg = {});
ArcUnion build_k_arcs(std::int64_t n);       // M(n^{2/5})
ArcUnion build_kprime_arcs(std::int64_t n);  // M(sqrt(n)/2)
ArcUnion build_slice(std::int64_t n, double Y);  // M(2Y) minus M(Y)
// M(Q) with X = n
ArcUnion build_major(std::int64_t n, double Q);

// 1/(q + n|q alpha - a|) on the covering arc of M(sqrt(n)/2), else 0.
double upsilon(double alpha, std::int64_t n);

// ---- quadrature -------------------------------------------------------------

struct SetIntegral {
  Complex value;
  double boundary_error = 0.0;  // endpoints * sup|integrand| / M
  std::int64_t points = 0;
  bool exact = false;  // full circle and alias-free
};

// (1/M) sum over grid points in the set (or all points) of
// prod_i (conj? conj(v_i) : v_i)(alpha_j) * e(-alpha_j n).
SetIntegral integrate_values(std::span<const std::span<const Complex>> values, std::span<const bool> conjugate,
                             std::int64_t n, const ArcUnion* set, std::int64_t M, std::int64_t bandwidth = -1);

// I(n) = int g f^s e(-alpha n) over the set (full circle when set is null), R given.
SetIntegral arc_integral(std::int64_t n, int k, int s, std::int64_t R, const ArcUnion* set, int oversample = 1,
                         const ResourceBudget& budget = {});

// Direct enumeration of sum log p over p + x_1^k + ... + x_s^k = n, x_i in A(P, R).
double arc_integral_oracle(std::int64_t n, int k, int s, std::int64_t R);

// v_k(beta) = (1/k) sum_{m <= n} m^{-1+1/k} e(beta m)
class VPoly {
 public:
  VPoly(std::int64_t n, int k);
  Complex operator()(double beta) const;
  std::int64_t n() const { return n_; }
  int k() const { return k_; }
  std::span<const double> weights() const { return w_; }

 private:
  std::int64_t n_;
  int k_;
  std::vector<double> w_;  // w_[m], m = 0..n
};
Complex v_poly(double beta, std::int64_t n, int k);

struct SingularIntegral {
  double value = 0.0;
  double error_estimate = 0.0;
  double spectral_value = 0.0;
};

// J(n, X) = int_{-X/n}^{X/n} v_1 v_k^s e(-beta n) d beta by adaptive
// Gauss-Kronrod; the spectral value is the same integral done termwise.
SingularIntegral singular_integral(std::int64_t n, int k, int s, double X, bool with_spectral = true);
double singular_integral_spectral(std::int64_t n, int k, int s, double X);

struct ModelErrorReport {
  std::int64_t n = 0;
  int k = 0;
  std::int64_t R = 0;
  std::int64_t P = 0;
  double rho_hat = 0.0;
  double n_height = 0.0;
  std::int64_t points = 0;
  double sup_error = 0.0;
  double normalized = 0.0;  // sup_error / n^{1/k}
};

// sup over grid points of N of |f - rho q^{-1} S(q,a) v_k(alpha - a/q)|.
ModelErrorReport major_arc_model_error(std::int64_t n, int k, std::int64_t R, const ArcUnion& n_arcs,
                                       int oversample = 8, const ResourceBudget& budget = {});

struct MomentRow {
  double Q = 0.0;
  double value = 0.0;
  double boundary_error = 0.0;
  double measure = 0.0;
  std::int64_t points = 0;
  std::optional<double> doubling_slope;  // log2(V(2Q)/V(Q)), on the row for Q
};

struct MomentReport {
  std::int64_t P = 0;
  std::int64_t R = 0;
  int k = 0;
  double t = 0.0;
  std::int64_t grid_size = 0;
  double f0 = 0.0;
  double full_circle = 0.0;
  double reference_slope = 0.0;  // 2 Delta_t / k with Delta_t = k Eta(t/k)
  bool below_bound_range = false;  // t < k + 1
  std::vector<MomentRow> rows;
};

// V_t(P, R, Q) over M(Q) with X = P^k for each Q in qs.
MomentReport moment_V(std::int64_t P, std::int64_t R, std::span<const double> qs, double t, int k, int oversample = 8,
                      const ResourceBudget& budget = {});

// ---- level sets ---------------------------------------------------------------

struct LevelClass {
  std::string label;
  double threshold = 0.0;  // U or V for dyadic classes, else 0
  std::vector<std::int64_t> indices;
  double measure = 0.0;
  double sup_g = 0.0;
  double sup_f = 0.0;
  double contribution_abs = 0.0;  // (1/M) sum |g f^s|
};

struct LevelPartition {
  std::string base;
  double base_measure = 0.0;       // continuous measure of the base set
  double base_grid_measure = 0.0;  // grid points / M
  double class_measure_sum = 0.0;
  std::vector<LevelClass> classes;
  std::vector<std::string> warnings;
};

struct LevelInputs {
  std::int64_t n = 0;
  int k = 0;
  int s = 0;
  int theta = 5;
  double P = 0.0;
  std::int64_t M = 0;
  std::span<const Complex> g;
  std::span<const Complex> f;
};

// T / L(U) split into G, H on the base set. U runs over sqrt(n)/2^j.
LevelPartition size_partition(const LevelInputs& in, const ArcUnion& base, std::string base_name);
// S / K(V) split into E, F on the base set with height Q. V runs over Q/2^j.
LevelPartition height_partition(const LevelInputs& in, const ArcUnion& base, double Q, std::string base_name);
// grid points of the base with n/U <= |g| (non-empty would mean L(U) meets the base)
std::int64_t count_large_g(const LevelInputs& in, const ArcUnion& base, double U);

struct DissectionReport {
  std::int64_t n = 0;
  int k = 0;
  int s = 0;
  int theta = 5;
  std::int64_t P = 0;
  std::int64_t R = 0;
  std::int64_t grid_size = 0;
  std::vector<ArcUnion> unions;
  LevelPartition size_ledger;                // on the minor arcs [0,1] minus K
  std::vector<LevelPartition> height_ledgers;  // one per slice of K minus L
  double sup_g_minor = 0.0;
  double c_g = 0.0;          // sup_{minor}|g| / (n^{4/5} L^4)
  double c_g_upsilon = 0.0;  // sup_{minor}|g| / ((n Upsilon^{1/2} + n^{4/5}) L^4)
  double c_weyl = 0.0;       // sup_{L}|f| / (P L^3 Upsilon^{1/(2k)})
  bool all_disjoint = true;
  double partition_defect = 0.0;  // max |class sum - base grid measure|
};

DissectionReport dissect(std::int64_t n, int k, int s, int theta, std::int64_t R, const DissectionConfig& cfg = {},
                         int oversample = 1, const ResourceBudget& budget = {});

}  // namespace circlekit
