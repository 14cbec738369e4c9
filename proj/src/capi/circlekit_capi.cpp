#include "circlekit/circlekit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "arith_core.hpp"
#include "budget.hpp"
#include "circle_engine.hpp"
#include "counting.hpp"
#include "embedded_tables.hpp"
#include "errors.hpp"
#include "exponent_calculus.hpp"
#include "report.hpp"
#include "singular_series.hpp"
#include "special_functions.hpp"

struct ck_context {
  circlekit::ResourceBudget budget = circlekit::ResourceBudget::from_environment();
  std::string last_error;
};

namespace {

using namespace circlekit;

struct NullArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ck_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return CK_ERR_DOMAIN;
    case ErrorKind::convergence: return CK_ERR_CONVERGENCE;
    case ErrorKind::resource: return CK_ERR_RESOURCE;
    case ErrorKind::consistency: return CK_ERR_CONSISTENCY;
    case ErrorKind::parse: return CK_ERR_PARSE;
    case ErrorKind::lookup: return CK_ERR_LOOKUP;
    case ErrorKind::aliasing: return CK_ERR_ALIASING;
    case ErrorKind::io: return CK_ERR_IO;
    case ErrorKind::internal: return CK_ERR_INTERNAL;
  }
  return CK_ERR_INTERNAL;
}

template <class Fn>
ck_status guarded(ck_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return CK_ERR_NULL;
  ctx->last_error.clear();
  try {
    fn();
    return CK_OK;
  } catch (const NullArgument& e) {
    ctx->last_error = e.what();
    return CK_ERR_NULL;
  } catch (const Error& e) {
    ctx->last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return CK_ERR_RESOURCE;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return CK_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown failure";
    return CK_ERR_INTERNAL;
  }
}

template <class T>
void need(T* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " must not be NULL");
}

Format to_format(ck_format f) {
  switch (f) {
    case CK_FORMAT_JSON: return Format::json;
    case CK_FORMAT_CSV: return Format::csv;
    case CK_FORMAT_PLAIN: return Format::plain;
  }
  throw DomainError("unknown output format");
}

void emit(const Report& r, ck_format fmt, ck_buffer* out) {
  need(out, "output buffer");
  const std::string text = serialize(r, to_format(fmt));
  char* data = static_cast<char*>(std::malloc(text.size() + 1));
  if (data == nullptr) throw std::bad_alloc();
  std::memcpy(data, text.data(), text.size());
  data[text.size()] = '\0';
  out->data = data;
  out->size = text.size();
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "0.1.0"; }

const char* ck_status_string(ck_status status) {
  switch (status) {
    case CK_OK: return "ok";
    case CK_ERR_NULL: return "null argument";
    case CK_ERR_DOMAIN: return "domain error";
    case CK_ERR_CONVERGENCE: return "convergence failure";
    case CK_ERR_RESOURCE: return "resource limit";
    case CK_ERR_CONSISTENCY: return "internal consistency failure";
    case CK_ERR_PARSE: return "parse error";
    case CK_ERR_LOOKUP: return "lookup error";
    case CK_ERR_ALIASING: return "aliasing";
    case CK_ERR_IO: return "i/o error";
    case CK_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ck_status ck_context_create(ck_context** out) {
  if (out == nullptr) return CK_ERR_NULL;
  *out = new (std::nothrow) ck_context();
  return *out ? CK_OK : CK_ERR_RESOURCE;
}

void ck_context_destroy(ck_context* ctx) { delete ctx; }

ck_status ck_context_set_threads(ck_context* ctx, unsigned threads) {
  return guarded(ctx, [&] {
    if (threads == 0) throw DomainError("threads must be >= 1");
    ctx->budget.threads = threads;
  });
}

ck_status ck_context_set_memory_mb(ck_context* ctx, uint64_t megabytes) {
  return guarded(ctx, [&] {
    if (megabytes == 0) throw DomainError("memory budget must be >= 1 MiB");
    ctx->budget.max_bytes = static_cast<std::size_t>(megabytes) << 20;
  });
}

const char* ck_last_error(const ck_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

ck_status ck_eta(ck_context* ctx, double t, double* eta_out, double* eta_prime) {
  return guarded(ctx, [&] {
    need(eta_out, "eta");
    auto p = eta(t);
    *eta_out = p.eta;
    if (eta_prime) *eta_prime = p.eta_prime;
  });
}

ck_status ck_constant_c(ck_context* ctx, int theta, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = solve_transcendental_constant(ThetaMode(theta));
  });
}

ck_status ck_find_c_theta(ck_context* ctx, int theta, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = find_c_theta(ThetaMode(theta));
  });
}

ck_status ck_integer_root(ck_context* ctx, int64_t n, int k, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = integer_root(n, k);
  });
}

ck_status ck_smooth_bound(ck_context* ctx, int64_t P, double exponent, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = smooth_bound(P, exponent);
  });
}

ck_status ck_prime_pi(ck_context* ctx, int64_t x, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    if (x < 2) {
      *out = 0;
      return;
    }
    *out = sieve_primes(x, ctx->budget).prime_pi(x);
  });
}

ck_status ck_smooth_count(ck_context* ctx, int64_t P, int64_t R, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = static_cast<int64_t>(smooth_set(P, R, ctx->budget).cardinality());
  });
}

ck_status ck_chi_p(ck_context* ctx, int64_t p, int64_t n, int k, int s, double* chi_analytic, double* chi_counting) {
  return guarded(ctx, [&] {
    auto rep = chi_p(p, n, k, s);
    if (chi_analytic) *chi_analytic = rep.chi_via_snp;
    if (chi_counting) *chi_counting = rep.chi_via_mp;
  });
}

ck_status ck_series_partial(ck_context* ctx, int64_t n, int k, int s, int64_t X, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = series_partials(n, k, s, {X}, ctx->budget).front().value;
  });
}

ck_status ck_euler_product(ck_context* ctx, int64_t n, int k, int s, int64_t prime_cutoff, double* product,
                          double* tail_bound) {
  return guarded(ctx, [&] {
    need(product, "product");
    auto rep = euler_product(n, k, s, prime_cutoff, {}, ctx->budget);
    *product = rep.product_value;
    if (tail_bound) *tail_bound = rep.tail_bound;
  });
}

ck_status ck_count_direct(ck_context* ctx, int k, int s, int64_t n, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = count_direct(k, s, n, ctx->budget);
  });
}

ck_status ck_count_range(ck_context* ctx, int k, int s, int64_t n_max, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    auto res = count_range(k, s, n_max, ConvolutionPlan::make(k, s, n_max), ctx->budget);
    std::memcpy(out, res.r.data(), res.r.size() * sizeof(int64_t));
  });
}

ck_status ck_count_conjugate(ck_context* ctx, int k, int s, int64_t N, int64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = count_conjugate(k, s, N, ctx->budget);
  });
}

ck_status ck_hl_prediction(ck_context* ctx, int k, int s, int64_t n, double series_value, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = hl_prediction(k, s, n, series_value);
  });
}

ck_status ck_upsilon(ck_context* ctx, double alpha, int64_t n, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = upsilon(alpha, n);
  });
}

ck_status ck_singular_integral(ck_context* ctx, int64_t n, int k, int s, double X, double* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = singular_integral(n, k, s, X, false).value;
  });
}

ck_status ck_full_circle_integral(ck_context* ctx, int64_t n, int k, int s, int64_t R, double* grid_value,
                                  double* direct_value) {
  return guarded(ctx, [&] {
    need(grid_value, "grid_value");
    *grid_value = arc_integral(n, k, s, R, nullptr, 1, ctx->budget).value.real();
    if (direct_value) *direct_value = arc_integral_oracle(n, k, s, R);
  });
}

ck_status ck_report_constants(ck_context* ctx, int theta, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] { emit(constants_report(theta), fmt, out); });
}

ck_status ck_report_eta(ck_context* ctx, const double* ts, size_t count, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    if (count > 0) need(ts, "ts");
    emit(eta_report(std::span<const double>(ts, count)), fmt, out);
  });
}

ck_status ck_report_plan(ck_context* ctx, int k, int theta, int prefer_table, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    ThetaMode mode(theta);
    auto plan = plan_for_k(k, mode, nullptr, prefer_table != 0);
    std::optional<SigmaPlan> sigma;
    if (plan.source == PlanSource::sigma_even) sigma = sigma_even_plan(k, mode);
    emit(plan_report(plan, sigma), fmt, out);
  });
}

ck_status ck_report_verify_tables(ck_context* ctx, const char* table1_path, const char* table2_path, ck_format fmt,
                                  ck_buffer* out, int* all_pass) {
  return guarded(ctx, [&] {
    auto t1 = table1_path ? load_table1(table1_path) : parse_table1(embedded_table1_csv());
    auto t2 = table2_path ? load_table2(table2_path) : parse_table2(embedded_table2_csv());
    auto rep = verify_table2(t2, t1);
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    emit(verify_tables_report(rep), fmt, out);
  });
}

ck_status ck_report_sieve(ck_context* ctx, int64_t limit, int64_t P, int64_t R, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] { emit(sieve_report(limit, P, R, ctx->budget), fmt, out); });
}

ck_status ck_report_series(ck_context* ctx, int64_t n, int k, int s, int64_t prime_cutoff, const int64_t* xs,
                           size_t count, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    if (count > 0) need(xs, "xs");
    std::vector<std::int64_t> parts(xs, xs + count);
    auto rep = euler_product(n, k, s, prime_cutoff, parts, ctx->budget);
    std::vector<LocalFactorReport> checks;
    for (std::int64_t p = 2; p <= std::min<std::int64_t>(prime_cutoff, 50); ++p)
      if (is_prime_trial(p)) checks.push_back(chi_p(p, n, k, s));
    emit(series_report(rep, checks), fmt, out);
  });
}

ck_status ck_report_count(ck_context* ctx, int k, int s, int64_t n_lo, int64_t n_hi, const char* method,
                          ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    if (n_lo < 0 || n_hi < n_lo) throw DomainError("count needs 0 <= n_lo <= n_hi");
    const auto m = method ? convolution_method_from_string(method) : ConvolutionMethod::automatic;
    auto res = count_range(k, s, n_hi, ConvolutionPlan::make(k, s, n_hi, m), ctx->budget);
    emit(count_report(k, s, n_lo, n_hi, res), fmt, out);
  });
}

ck_status ck_report_compare(ck_context* ctx, int k, int s, int64_t n_lo, int64_t n_hi, int64_t stride,
                            int64_t prime_cutoff, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    emit(compare_report_doc(compare_report(k, s, n_lo, n_hi, stride, prime_cutoff, ctx->budget)), fmt, out);
  });
}

ck_status ck_report_dissect(ck_context* ctx, int64_t n, int k, int s, int theta, int64_t R, int oversample,
                            int include_arcs, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    emit(dissect_report(dissect(n, k, s, theta, R, {}, oversample, ctx->budget), include_arcs != 0), fmt, out);
  });
}

ck_status ck_report_moments(ck_context* ctx, int64_t P, int64_t R, int k, double t, const double* qs, size_t count,
                            int oversample, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    if (count > 0) need(qs, "qs");
    emit(moments_report(moment_V(P, R, std::span<const double>(qs, count), t, k, oversample, ctx->budget)), fmt,
         out);
  });
}

ck_status ck_report_model_error(ck_context* ctx, const int64_t* ns, size_t count, int k, double r_exponent,
                                int oversample, ck_format fmt, ck_buffer* out) {
  return guarded(ctx, [&] {
    if (count > 0) need(ns, "ns");
    std::vector<ModelErrorReport> reps;
    for (size_t i = 0; i < count; ++i) {
      const auto n = ns[i];
      const auto R = smooth_bound(integer_root(n, k), r_exponent);
      reps.push_back(major_arc_model_error(n, k, R, build_n_arcs(n, k), oversample, ctx->budget));
    }
    emit(model_error_report(reps), fmt, out);
  });
}

void ck_buffer_free(ck_buffer* buf) {
  if (buf == nullptr) return;
  std::free(buf->data);
  buf->data = nullptr;
  buf->size = 0;
}

}  // extern "C"
