// One line per acceptance criterion: PASS/FAIL, wall time, and the numbers behind it.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "arith_core.hpp"
#include "circle_engine.hpp"
#include "counting.hpp"
#include "embedded_tables.hpp"
#include "exponent_calculus.hpp"
#include "report.hpp"
#include "singular_series.hpp"
#include "special_functions.hpp"

using namespace circlekit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

void constants(Outcome& o) {
  const double c = solve_transcendental_constant(ThetaMode(5));
  const double cp = solve_transcendental_constant(ThetaMode(4));
  const double fc = find_c_theta(ThetaMode(5));
  const double fcp = find_c_theta(ThetaMode(4));
  const double c1 = eta_level_constant(ThetaMode(5));
  const double c1p = eta_level_constant(ThetaMode(4));
  o.require(std::abs(c - 2.134693) < 1e-6, "c");
  o.require(std::abs(cp - 1.961969) < 1e-6, "c'");
  o.require(std::abs(fc - c) < 1e-8, "find_c_theta(5)");
  o.require(std::abs(fcp - cp) < 1e-8, "find_c_theta(4)");
  o.require(std::abs(c1 - 2.409437) < 1e-6, "c1");
  o.require(std::abs(c1p - 2.136294) < 1e-6, "c1'");
  o.detail.precision(10);
  o.detail << "c=" << c << " c'=" << cp << " |E-root - c|=" << std::abs(fc - c) << " c1=" << c1 << " c1'=" << c1p;
}

void eta_suite(Outcome& o) {
  double worst_res = 0, worst_fd = 0, min_gap = 1e300;
  for (int i = 1; i <= 1000; ++i) {
    const double t = 0.01 + (10.0 - 0.01) * i / 1000.0;
    const double u = eta(t).eta;
    worst_res = std::max(worst_res, std::abs(u + std::log(u) - (1 - t)));
  }
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + 2.0 * i / 999.0;
    min_gap = std::min(min_gap, eta(t).eta - 1.0 / (4 * t - 1));
  }
  const double h = 1e-5;
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.05 + 9.9 * i / 200.0;
    const double fd = (eta(t + h).eta - eta(t - h).eta) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(eta(t).eta_prime - fd));
  }
  o.require(worst_res < 1e-10, "residual");
  o.require(min_gap > 0, "eta > 1/(4t-1) on [1,3]");
  o.require(worst_fd < 1e-6, "derivative");
  o.detail << "max residual=" << worst_res << " min(eta - 1/(4t-1))=" << min_gap << " max |eta' - fd|=" << worst_fd;
}

void optimizer(Outcome& o) {
  double worst_e = 0, worst_tp = 0, worst_drop = 0;
  int plans = 0;
  for (int th : {4, 5}) {
    ThetaMode mode(th);
    for (int i = 0; i < 50; ++i) {
      const double sigma = 1.5 + 1.5 * i / 49.0;
      const double closed = big_e(sigma, mode);
      const double direct = minimize_h(sigma, mode).second;
      worst_e = std::max(worst_e, std::abs(closed - direct));
    }
    const double h = 1e-6;
    for (int i = 0; i <= 30; ++i) {
      const double sigma = 1.5 + 1.4 * i / 30.0;
      const double fd = (tau_of_sigma(sigma + h, mode) - tau_of_sigma(sigma - h, mode)) / (2 * h);
      worst_tp = std::max(worst_tp, std::abs(tau_prime(sigma, mode) - fd));
    }
    for (int k = 17; k <= 60; ++k) {
      auto p = sigma_even_plan(k, mode);
      worst_drop = std::max(worst_drop, p.tau_drop);
      ++plans;
    }
  }
  o.require(worst_e < 1e-6, "E closed form vs minimisation");
  o.require(worst_tp < 1e-6, "tau' vs finite differences");
  o.require(worst_drop < 2, "k(tau(c) - tau(c + 4/k)) < 2");
  o.detail << "max |E - min h|=" << worst_e << " max |tau' - fd|=" << worst_tp << " plans="
           << plans << " max drop=" << worst_drop;
}

void tables(Outcome& o) {
  auto rep = verify_table2(parse_table2(embedded_table2_csv()), parse_table1(embedded_table1_csv()));
  int t1_ok = 0;
  for (const auto& c : rep.table1) t1_ok += c.pass;
  std::string skipped;
  for (const auto& b : rep.blocks)
    if (!b.present) skipped += " k=" + std::to_string(b.k) + "/theta=" + std::to_string(b.theta);
  o.require(rep.failed == 0, "some block or cross-check failed");
  o.require(rep.passed + rep.skipped == 32, "block count");
  o.require(t1_ok == static_cast<int>(rep.table1.size()), "table 1 cross-check");
  o.detail << "blocks passed=" << rep.passed << " blank in source=" << rep.skipped << " (" << skipped
           << " ) table1 checks " << t1_ok << "/" << rep.table1.size();
}

void local_factors(Outcome& o) {
  double worst = 0;
  int checks = 0;
  auto primes = sieve_primes(50);
  for (auto p : primes.primes())
    for (int k = 1; k <= 5; ++k)
      for (int s = 3; s <= 6; ++s)
        for (std::int64_t n = 1; n <= 30; ++n) {
          auto r = chi_p(p, n, k, s);
          worst = std::max(worst, std::abs(r.chi_via_snp - r.chi_via_mp));
          ++checks;
        }
  auto hand = chi_p(3, 1, 2, 3);
  o.require(worst < 1e-9, "dual route");
  o.require(std::abs(hand.chi_via_mp - 7.0 / 6.0) < 1e-12 && std::abs(hand.chi_via_snp - 7.0 / 6.0) < 1e-12,
            "chi_3(1)");
  o.detail << checks << " factors, max route gap=" << worst << " chi_3(1)=" << hand.chi_via_snp;
}

void series(Outcome& o) {
  std::vector<std::int64_t> xs;
  for (std::int64_t x = 8; x <= 1024; x *= 2) xs.push_back(x);
  auto rep = euler_product(100, 3, 4, 10000, xs);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i + 1 < rep.partials.size(); ++i) {
    lx.push_back(std::log(double(rep.partials[i].x)));
    ly.push_back(std::log(std::abs(rep.partials[i + 1].value - rep.partials[i].value)));
  }
  const double slope = slope_fit(lx, ly);
  // geometric extrapolation of the last observed difference
  const double last = std::abs(rep.partials.back().value - rep.partials[rep.partials.size() - 2].value);
  const double ratio = std::pow(2.0, std::min(slope, -0.3));
  const double qsum_tail = last * ratio / (1 - ratio);
  const double qsum = rep.partials.back().value;
  const double gap = std::abs(std::log(qsum) - std::log(rep.product_value));
  const double allowed = rep.tail_bound + qsum_tail / qsum;
  o.require(slope <= -0.3, "slope");
  o.require(gap <= allowed, "product vs q-sum");
  o.require(rep.product_value > 0 && !rep.nonpositive_factor, "positivity");
  o.detail.precision(8);
  o.detail << "slope=" << slope << " S(n,1024)=" << qsum << " product=" << rep.product_value << " |log gap|=" << gap
           << " allowed=" << allowed << " (product tail " << rep.tail_bound << ", C=" << rep.tail_constant << ")";
}

void exact_counting(Outcome& o) {
  std::int64_t mismatches = 0;
  for (auto [k, s] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 4}}) {
    auto res = count_range(k, s, 3000);
    for (std::int64_t n = 0; n <= 3000; ++n) mismatches += res.r[n] != count_direct(k, s, n);
  }
  const auto r10 = count_range(2, 2, 10).r[10];
  o.require(mismatches == 0, "count_range vs count_direct");
  o.require(r10 == 3 && count_direct(2, 2, 10) == 3, "r_{2,2}(10)");
  o.detail << "mismatches=" << mismatches << " r_{2,2}(10)=" << r10;
}

void quadrature(Outcome& o) {
  double worst = 0;
  std::int64_t points = 0;
  for (auto [k, s] : {std::pair{2, 2}, std::pair{3, 3}}) {
    const std::int64_t nmax = 2000;
    auto f = build_f_spectrum(nmax, k, integer_root(nmax, k));
    auto g = build_g_spectrum(nmax);
    const std::int64_t bw = (s + 1) * nmax;
    auto grid = GridSpec::for_bandwidth(bw);
    auto fv = evaluate_on_grid(f, grid);
    auto gv = evaluate_on_grid(g, grid);
    std::vector<std::span<const Complex>> sp{gv};
    for (int i = 0; i < s; ++i) sp.push_back(fv);
    bool conj[8] = {};
    for (std::int64_t n = 1; n <= nmax; ++n) {
      auto r = integrate_values(sp, std::span<const bool>(conj, sp.size()), n, nullptr, grid.size, bw);
      const double want = arc_integral_oracle(n, k, s, integer_root(n, k));
      worst = std::max(worst, std::abs(r.value.real() - want) / std::max(1.0, want));
      ++points;
    }
  }
  o.require(worst < 1e-6, "relative error");
  o.detail << points << " values of n, max relative error=" << worst;
}

void hl_check(Outcome& o) {
  auto rep = compare_report(2, 2, 50000, 100000, 1, 10000);
  o.require(rep.mean_ratio >= 0.8 && rep.mean_ratio <= 1.2, "mean ratio");
  o.require(rep.min_ratio > 0, "min ratio");
  o.detail.precision(6);
  o.detail << rep.rows.size() << " rows, mean r/prediction=" << rep.mean_ratio << " min=" << rep.min_ratio
           << " zeros=" << rep.zero_count;
}

void dissection(Outcome& o) {
  const std::int64_t n = 100000;
  const auto P = integer_root(n, 2);
  const auto R = smooth_bound(P, 1.0 / 8);
  auto rep = dissect(n, 2, 3, 5, R);
  const double L = std::log(double(n));
  const double envelope = std::pow(double(n), 0.8) * std::pow(L, 4);
  o.require(rep.all_disjoint, "disjoint arcs");
  o.require(rep.partition_defect < 1e-9, "partition");
  o.require(std::isfinite(rep.c_g) && rep.sup_g_minor <= rep.c_g * envelope * (1 + 1e-12), "envelope");
  o.require(!rep.size_ledger.classes.empty() && !rep.height_ledgers.empty(), "ledgers");
  std::size_t warnings = rep.size_ledger.warnings.size();
  for (const auto& h : rep.height_ledgers) warnings += h.warnings.size();
  o.detail << "unions=" << rep.unions.size() << " size classes=" << rep.size_ledger.classes.size()
           << " height ledgers=" << rep.height_ledgers.size() << " defect=" << rep.partition_defect
           << " sup|g| on minor=" << rep.sup_g_minor << " C=" << rep.c_g << " warnings=" << warnings;
}

void moments(Outcome& o) {
  std::vector<double> qs;
  for (double q = 1; q <= 256; q *= 2) qs.push_back(q);
  // R = P: with R = P^{1/8} the smooth set at P = 64 is {1} and every moment is trivial
  auto a = moment_V(64, 64, qs, 8, 3);
  auto b = moment_V(64, 64, qs, 8, 3);
  const auto sa = serialize(moments_report(a), Format::json);
  const auto sb = serialize(moments_report(b), Format::json);
  int slopes = 0;
  for (const auto& r : a.rows) slopes += r.doubling_slope.has_value();
  o.require(sa == sb, "reproducible");
  o.require(slopes == static_cast<int>(qs.size()) - 1, "slope rows");
  o.require(std::abs(a.reference_slope - 2 * eta(8.0 / 3).eta) < 1e-12, "reference slope");
  o.detail << "rows=" << a.rows.size() << " slopes=" << slopes << " reference 2*Delta_t/k=" << a.reference_slope;
  for (const auto& r : a.rows)
    if (r.doubling_slope) o.detail << " Q" << r.Q << ":" << *r.doubling_slope;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> fn;
  };
  const std::vector<Criterion> all{
      {1, "constants", 1, constants},          {2, "eta suite", 1, eta_suite},
      {3, "optimizer", 5, optimizer},          {4, "exponent tables", 1, tables},
      {5, "local factors", 30, local_factors}, {6, "series convergence", 60, series},
      {7, "exact counting", 60, exact_counting}, {8, "quadrature exactness", 120, quadrature},
      {9, "prediction desk check", 600, hl_check}, {10, "dissection ledger", 600, dissection},
      {11, "moment diagnostics", 300, moments},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "runtime over budget");
    if (!o.pass) ++failed;
    std::printf("%s %2d %-22s %8.3fs (budget %gs)  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
