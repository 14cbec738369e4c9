#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "circlekit/circlekit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConsistency = 3;

int exit_code(ck_status st) {
  switch (st) {
    case CK_OK: return kExitOk;
    case CK_ERR_DOMAIN:
    case CK_ERR_PARSE:
    case CK_ERR_LOOKUP:
    case CK_ERR_ALIASING:
    case CK_ERR_NULL: return kExitValidation;
    case CK_ERR_CONSISTENCY: return kExitConsistency;
    default: return kExitOther;
  }
}

struct Common {
  std::string format = "json";
  std::string out_path;
  unsigned threads = 0;
};

// R is either fixed or P^eta
struct RPolicy {
  long long R = 0;
  double eta = 0.125;
};

ck_format parse_format(const std::string& s) {
  if (s == "csv") return CK_FORMAT_CSV;
  if (s == "plain") return CK_FORMAT_PLAIN;
  return CK_FORMAT_JSON;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}));
  app->add_option("-o,--out", c.out_path, "Write the report here instead of stdout");
  app->add_option("--threads", c.threads, "Worker threads (default: all cores)")->check(CLI::Range(1u, 4096u));
}

void add_r_policy(CLI::App* app, RPolicy& r) {
  auto* fixed = app->add_option("--R", r.R, "Smoothness bound R (fixed integer)")->check(CLI::Range(1LL, 1LL << 40));
  app->add_option("--eta", r.eta, "Use R = P^eta, eta in (0, 1/7]; default 1/8")
      ->check(CLI::Range(1e-9, 1.0 / 7.0 + 1e-15))
      ->excludes(fixed);
}

class Runner {
 public:
  Runner() {
    if (ck_context_create(&ctx_) != CK_OK) throw std::runtime_error("cannot create context");
  }
  ~Runner() { ck_context_destroy(ctx_); }
  ck_context* ctx() { return ctx_; }

  int finish(ck_status st, ck_buffer& buf, const Common& c) {
    if (st != CK_OK) {
      std::cerr << "error: " << ck_status_string(st) << ": " << ck_last_error(ctx_) << '\n';
      ck_buffer_free(&buf);
      return exit_code(st);
    }
    int rc = kExitOk;
    if (c.out_path.empty()) {
      std::fwrite(buf.data, 1, buf.size, stdout);
      std::fflush(stdout);
    } else {
      std::ofstream f(c.out_path, std::ios::binary);
      f.write(buf.data, static_cast<std::streamsize>(buf.size));
      if (!f) {
        std::cerr << "error: cannot write " << c.out_path << '\n';
        rc = kExitOther;
      }
    }
    ck_buffer_free(&buf);
    return rc;
  }

  ck_status apply(const Common& c) {
    if (c.threads > 0) return ck_context_set_threads(ctx_, c.threads);
    return CK_OK;
  }

  long long resolve_r(const RPolicy& r, long long P) {
    if (r.R > 0) return r.R;
    int64_t out = 1;
    if (ck_smooth_bound(ctx_, P, r.eta, &out) != CK_OK) throw std::runtime_error(ck_last_error(ctx_));
    return out;
  }

  long long root(long long n, int k) {
    int64_t P = 0;
    if (ck_integer_root(ctx_, n, k, &P) != CK_OK) throw CLI::ValidationError("n", ck_last_error(ctx_));
    return P;
  }

 private:
  ck_context* ctx_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circlekit: numerical companion for additive problems with one prime and k-th powers"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  RPolicy rpol;
  std::function<int()> action;
  Runner runner;

  // constants
  int theta = 5;
  auto* c_const = app.add_subcommand(
      "constants",
      "Threshold constants: c solving 2c = 2 + ln(theta*c - 1), the same c as the root of E(sigma) = 1, "
      "and c1 = (theta-1)/theta + ln(theta) where Eta(c1) = 1/theta");
  c_const->add_option("--theta", theta, "Envelope exponent mode, 5 (unconditional) or 4 (GRH)")
      ->check(CLI::IsMember({4, 5}));
  add_common(c_const, common);
  c_const->callback([&] {
    action = [&] {
      ck_buffer buf{};
      return runner.finish(ck_report_constants(runner.ctx(), theta, parse_format(common.format), &buf), buf, common);
    };
  });

  // eta
  std::vector<double> ts;
  double t_from = 0.0, t_to = 0.0;
  int t_steps = 0;
  auto* c_eta = app.add_subcommand(
      "eta", "The implicit function Eta(t): the root u in (0,1) of u + ln u = 1 - t, with its derivative");
  c_eta->add_option("--t", ts, "Evaluation points (repeatable)");
  c_eta->add_option("--from", t_from, "Range start");
  c_eta->add_option("--to", t_to, "Range end");
  c_eta->add_option("--steps", t_steps, "Number of equal steps in [from, to]")->check(CLI::Range(1, 10000000));
  add_common(c_eta, common);
  c_eta->callback([&] {
    action = [&] {
      std::vector<double> pts = ts;
      if (t_steps > 0)
        for (int i = 0; i <= t_steps; ++i) pts.push_back(t_from + (t_to - t_from) * i / t_steps);
      if (pts.empty()) throw CLI::ValidationError("eta", "give --t or --from/--to/--steps");
      ck_buffer buf{};
      return runner.finish(
          ck_report_eta(runner.ctx(), pts.data(), pts.size(), parse_format(common.format), &buf), buf, common);
    };
  });

  // plan
  int k = 2;
  bool prefer_table = false;
  auto* c_plan = app.add_subcommand(
      "plan",
      "Admissible (s, t) plan for a given k: exponents Delta_s, Delta_{s+t}, the quantity Omega, and the "
      "two feasibility conditions 2 Delta_s < k and Omega < 1");
  c_plan->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(3, 1000));
  c_plan->add_option("--theta", theta, "Envelope mode 4 or 5")->check(CLI::IsMember({4, 5}));
  c_plan->add_flag("--prefer-table", prefer_table, "Use the shipped table row for 17 <= k <= 20");
  add_common(c_plan, common);
  c_plan->callback([&] {
    action = [&] {
      ck_buffer buf{};
      return runner.finish(
          ck_report_plan(runner.ctx(), k, theta, prefer_table ? 1 : 0, parse_format(common.format), &buf), buf,
          common);
    };
  });

  // verify-tables
  std::string table1_path, table2_path;
  auto* c_verify = app.add_subcommand(
      "verify-tables",
      "Recompute Omega for every row of the shipped exponent table in exact rational arithmetic, check the "
      "round-up convention and both feasibility conditions, and cross-check the s-values table");
  c_verify->add_option("--table1", table1_path, "CSV with columns k,S0,S1")->check(CLI::ExistingFile);
  c_verify->add_option("--table2", table2_path, "CSV with the exponent table")->check(CLI::ExistingFile);
  add_common(c_verify, common);
  c_verify->callback([&] {
    action = [&] {
      ck_buffer buf{};
      int all_pass = 0;
      auto st = ck_report_verify_tables(runner.ctx(), table1_path.empty() ? nullptr : table1_path.c_str(),
                                        table2_path.empty() ? nullptr : table2_path.c_str(),
                                        parse_format(common.format), &buf, &all_pass);
      int rc = runner.finish(st, buf, common);
      if (rc == kExitOk && !all_pass) rc = kExitConsistency;
      return rc;
    };
  });

  // sieve
  long long limit = 0, sieve_P = 0;
  auto* c_sieve = app.add_subcommand(
      "sieve", "Prime counts pi(x), Chebyshev theta(x), and the size of the smooth set A(P, R)");
  c_sieve->add_option("--limit", limit, "Sieve limit")->required()->check(CLI::Range(2LL, 1LL << 40));
  c_sieve->add_option("--P", sieve_P, "Also count R-smooth integers up to P")->check(CLI::Range(1LL, 1LL << 40));
  add_r_policy(c_sieve, rpol);
  add_common(c_sieve, common);
  c_sieve->callback([&] {
    action = [&] {
      const long long R = sieve_P > 0 ? runner.resolve_r(rpol, sieve_P) : 0;
      ck_buffer buf{};
      return runner.finish(ck_report_sieve(runner.ctx(), limit, sieve_P, R, parse_format(common.format), &buf), buf,
                           common);
    };
  });

  // series
  long long n = 0, cutoff = 10000;
  int s = 3;
  std::vector<long long> partial_xs;
  auto* c_series = app.add_subcommand(
      "series",
      "Singular series: Euler product of the local densities chi_p(n) up to a prime cutoff, with a tail bound, "
      "plus truncated sums over q <= X; chi_p is checked by exponential sums and by counting congruence "
      "solutions for p <= 50");
  c_series->add_option("--n", n, "Target n")->required()->check(CLI::Range(1LL, 1LL << 50));
  c_series->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(1, 64));
  c_series->add_option("--s", s, "Number of k-th powers")->required()->check(CLI::Range(1, 64));
  c_series->add_option("--cutoff", cutoff, "Largest prime in the product")->check(CLI::Range(2LL, 10000000LL));
  c_series->add_option("--partials", partial_xs, "Truncation points X for the q-sum")
      ->check(CLI::Range(1LL, 1LL << 20));
  add_common(c_series, common);
  c_series->callback([&] {
    action = [&] {
      std::vector<int64_t> xs(partial_xs.begin(), partial_xs.end());
      ck_buffer buf{};
      return runner.finish(ck_report_series(runner.ctx(), n, k, s, cutoff, xs.data(), xs.size(),
                                            parse_format(common.format), &buf),
                           buf, common);
    };
  });

  // count
  long long n_lo = 0, n_hi = 0;
  std::string method = "auto";
  auto* c_count = app.add_subcommand(
      "count", "Exact number r(n) of ordered solutions of n = p + x_1^k + ... + x_s^k by convolution");
  auto* opt_n = c_count->add_option("--n", n, "Single n")->check(CLI::Range(0LL, 1LL << 30));
  c_count->add_option("--n-lo", n_lo, "Range start")->excludes(opt_n)->check(CLI::Range(0LL, 1LL << 30));
  c_count->add_option("--n-hi", n_hi, "Range end")->excludes(opt_n)->check(CLI::Range(0LL, 1LL << 30));
  c_count->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(1, 64));
  c_count->add_option("--s", s, "Number of k-th powers")->required()->check(CLI::Range(0, 64));
  c_count->add_option("--method", method, "Convolution route")
      ->check(CLI::IsMember({"auto", "direct", "float", "integer"}));
  add_common(c_count, common);
  c_count->callback([&] {
    action = [&] {
      long long lo = n_lo, hi = n_hi;
      if (c_count->count("--n") > 0) lo = hi = n;
      if (hi < lo) throw CLI::ValidationError("count", "need n-lo <= n-hi");
      ck_buffer buf{};
      return runner.finish(
          ck_report_count(runner.ctx(), k, s, lo, hi, method.c_str(), parse_format(common.format), &buf), buf,
          common);
    };
  });

  // compare
  long long stride = 1;
  auto* c_compare = app.add_subcommand(
      "compare",
      "Compare exact r(n) with the heuristic Hardy-Littlewood value S(n) Gamma(1+1/k)^s / Gamma(1+s/k) "
      "n^{s/k} / log n over a range of n");
  c_compare->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(1, 64));
  c_compare->add_option("--s", s, "Number of k-th powers")->required()->check(CLI::Range(1, 64));
  c_compare->add_option("--n-lo", n_lo, "Range start")->required()->check(CLI::Range(2LL, 1LL << 30));
  c_compare->add_option("--n-hi", n_hi, "Range end")->required()->check(CLI::Range(2LL, 1LL << 30));
  c_compare->add_option("--stride", stride, "Step between sampled n")->check(CLI::Range(1LL, 1LL << 30));
  c_compare->add_option("--cutoff", cutoff, "Prime cutoff for the singular series")
      ->check(CLI::Range(2LL, 10000000LL));
  add_common(c_compare, common);
  c_compare->callback([&] {
    action = [&] {
      ck_buffer buf{};
      return runner.finish(ck_report_compare(runner.ctx(), k, s, n_lo, n_hi, stride, cutoff,
                                             parse_format(common.format), &buf),
                           buf, common);
    };
  });

  // dissect
  int oversample = 1;
  bool with_arcs = false;
  auto* c_dissect = app.add_subcommand(
      "dissect",
      "Farey dissection of the circle: arc unions N, L, K, K', the minor arcs, level sets of |g| and |f| "
      "(classes T, G, H on the minor arcs and S, E, F on height slices), and empirical envelope constants "
      "for the prime sum and the smooth Weyl sum");
  c_dissect->add_option("--n", n, "Target n")->required()->check(CLI::Range(1024LL, 1LL << 26));
  c_dissect->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(2, 64));
  c_dissect->add_option("--s", s, "Number of k-th powers")->required()->check(CLI::Range(1, 64));
  c_dissect->add_option("--theta", theta, "Envelope mode 4 or 5")->check(CLI::IsMember({4, 5}));
  c_dissect->add_option("--oversample", oversample, "Grid oversampling factor")->check(CLI::Range(1, 64));
  c_dissect->add_flag("--arcs", with_arcs, "Include the generating arcs {q,a,center,half_width} in JSON");
  add_r_policy(c_dissect, rpol);
  add_common(c_dissect, common);
  c_dissect->callback([&] {
    action = [&] {
      const long long R = runner.resolve_r(rpol, runner.root(n, k));
      ck_buffer buf{};
      return runner.finish(ck_report_dissect(runner.ctx(), n, k, s, theta, R, oversample, with_arcs ? 1 : 0,
                                             parse_format(common.format), &buf),
                           buf, common);
    };
  });

  // moments
  long long mP = 0;
  double t_order = 0.0;
  std::vector<double> qs;
  int m_oversample = 8;
  auto* c_moments = app.add_subcommand(
      "moments",
      "Major-arc moments V_t(P, R, Q) of the smooth Weyl sum over M(Q), with doubling slopes "
      "log2 V(2Q)/V(Q) and the reference slope 2 Delta_t / k from Delta_t = k Eta(t/k)");
  c_moments->add_option("--P", mP, "Length P")->required()->check(CLI::Range(2LL, 1LL << 20));
  c_moments->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(1, 64));
  c_moments->add_option("--t", t_order, "Moment order (may be fractional)")->required()->check(CLI::PositiveNumber);
  c_moments->add_option("--Q", qs, "Heights Q (default: 1, 2, 4, ... up to P^{k/2}/2)");
  c_moments->add_option("--oversample", m_oversample, "Grid oversampling factor")->check(CLI::Range(1, 64));
  add_r_policy(c_moments, rpol);
  add_common(c_moments, common);
  c_moments->callback([&] {
    action = [&] {
      std::vector<double> heights = qs;
      if (heights.empty()) {
        const double top = 0.5 * std::pow(static_cast<double>(mP), k / 2.0);
        for (double q = 1; q <= top * (1 + 1e-12); q *= 2) heights.push_back(q);
      }
      const long long R = runner.resolve_r(rpol, mP);
      ck_buffer buf{};
      return runner.finish(ck_report_moments(runner.ctx(), mP, R, k, t_order, heights.data(), heights.size(),
                                             m_oversample, parse_format(common.format), &buf),
                           buf, common);
    };
  });

  // model-error
  std::vector<long long> ns;
  double r_exp = 1.0 / 3.0;
  auto* c_model = app.add_subcommand(
      "model-error",
      "Largest deviation of the smooth Weyl sum f from rho q^{-1} S(q,a) v_k(alpha - a/q) on the arcs N, "
      "with rho the empirical smooth density, normalised by n^{1/k}");
  c_model->add_option("--n", ns, "Values of n (repeatable)")->required()->check(CLI::Range(16LL, 1LL << 26));
  c_model->add_option("--k", k, "Exponent k")->required()->check(CLI::Range(1, 64));
  c_model->add_option("--r-exponent", r_exp, "R = P^x, x in (0, 1]")->check(CLI::Range(1e-9, 1.0));
  c_model->add_option("--oversample", m_oversample, "Grid oversampling factor")->check(CLI::Range(1, 64));
  add_common(c_model, common);
  c_model->callback([&] {
    action = [&] {
      std::vector<int64_t> v(ns.begin(), ns.end());
      ck_buffer buf{};
      return runner.finish(ck_report_model_error(runner.ctx(), v.data(), v.size(), k, r_exp, m_oversample,
                                                 parse_format(common.format), &buf),
                           buf, common);
    };
  });

  try {
    app.parse(argc, argv);
    if (auto st = runner.apply(common); st != CK_OK) {
      std::cerr << "error: " << ck_last_error(runner.ctx()) << '\n';
      return exit_code(st);
    }
    return action ? action() : kExitValidation;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
