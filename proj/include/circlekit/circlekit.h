#ifndef CIRCLEKIT_H
#define CIRCLEKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(CIRCLEKIT_BUILDING)
#define CK_API __attribute__((visibility("default")))
#else
#define CK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ck_context ck_context;

typedef enum ck_status {
  CK_OK = 0,
  CK_ERR_NULL = 1,
  CK_ERR_DOMAIN = 2,
  CK_ERR_CONVERGENCE = 3,
  CK_ERR_RESOURCE = 4,
  CK_ERR_CONSISTENCY = 5,
  CK_ERR_PARSE = 6,
  CK_ERR_LOOKUP = 7,
  CK_ERR_ALIASING = 8,
  CK_ERR_IO = 9,
  CK_ERR_INTERNAL = 10
} ck_status;

typedef enum ck_format { CK_FORMAT_JSON = 0, CK_FORMAT_CSV = 1, CK_FORMAT_PLAIN = 2 } ck_format;

/* Owned by the caller; release with ck_buffer_free. data is NUL terminated. */
typedef struct ck_buffer {
  char* data;
  size_t size;
} ck_buffer;

CK_API const char* ck_version(void);
CK_API const char* ck_status_string(ck_status status);

/* Context: resource limits plus the last error message. Reads
   CIRCLEKIT_MEMORY_MB at creation. Not safe to share between threads. */
CK_API ck_status ck_context_create(ck_context** out);
CK_API void ck_context_destroy(ck_context* ctx);
CK_API ck_status ck_context_set_threads(ck_context* ctx, unsigned threads);
CK_API ck_status ck_context_set_memory_mb(ck_context* ctx, uint64_t megabytes);
CK_API const char* ck_last_error(const ck_context* ctx);

/* ---- scalar entry points ---- */
CK_API ck_status ck_eta(ck_context* ctx, double t, double* eta, double* eta_prime);
CK_API ck_status ck_constant_c(ck_context* ctx, int theta, double* out);
CK_API ck_status ck_find_c_theta(ck_context* ctx, int theta, double* out);
CK_API ck_status ck_integer_root(ck_context* ctx, int64_t n, int k, int64_t* out);
/* floor(P^exponent) with a small tolerance, at least 1 */
CK_API ck_status ck_smooth_bound(ck_context* ctx, int64_t P, double exponent, int64_t* out);
CK_API ck_status ck_prime_pi(ck_context* ctx, int64_t x, int64_t* out);
CK_API ck_status ck_smooth_count(ck_context* ctx, int64_t P, int64_t R, int64_t* out);
CK_API ck_status ck_chi_p(ck_context* ctx, int64_t p, int64_t n, int k, int s, double* chi_analytic,
                          double* chi_counting);
CK_API ck_status ck_series_partial(ck_context* ctx, int64_t n, int k, int s, int64_t X, double* out);
CK_API ck_status ck_euler_product(ck_context* ctx, int64_t n, int k, int s, int64_t prime_cutoff, double* product,
                                  double* tail_bound);
CK_API ck_status ck_count_direct(ck_context* ctx, int k, int s, int64_t n, int64_t* out);
/* out must hold n_max + 1 entries */
CK_API ck_status ck_count_range(ck_context* ctx, int k, int s, int64_t n_max, int64_t* out);
CK_API ck_status ck_count_conjugate(ck_context* ctx, int k, int s, int64_t N, int64_t* out);
CK_API ck_status ck_hl_prediction(ck_context* ctx, int k, int s, int64_t n, double series_value, double* out);
CK_API ck_status ck_upsilon(ck_context* ctx, double alpha, int64_t n, double* out);
CK_API ck_status ck_singular_integral(ck_context* ctx, int64_t n, int k, int s, double X, double* out);
CK_API ck_status ck_full_circle_integral(ck_context* ctx, int64_t n, int k, int s, int64_t R, double* grid_value,
                                         double* direct_value);

/* ---- reports ---- */
CK_API ck_status ck_report_constants(ck_context* ctx, int theta, ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_eta(ck_context* ctx, const double* ts, size_t count, ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_plan(ck_context* ctx, int k, int theta, int prefer_table, ck_format fmt, ck_buffer* out);
/* NULL paths select the shipped tables. all_pass may be NULL. */
CK_API ck_status ck_report_verify_tables(ck_context* ctx, const char* table1_path, const char* table2_path,
                                         ck_format fmt, ck_buffer* out, int* all_pass);
CK_API ck_status ck_report_sieve(ck_context* ctx, int64_t limit, int64_t P, int64_t R, ck_format fmt,
                                 ck_buffer* out);
/* xs may be NULL when count is 0 */
CK_API ck_status ck_report_series(ck_context* ctx, int64_t n, int k, int s, int64_t prime_cutoff, const int64_t* xs,
                                  size_t count, ck_format fmt, ck_buffer* out);
/* method: "auto", "direct", "float", "integer" (NULL means auto) */
CK_API ck_status ck_report_count(ck_context* ctx, int k, int s, int64_t n_lo, int64_t n_hi, const char* method,
                                 ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_compare(ck_context* ctx, int k, int s, int64_t n_lo, int64_t n_hi, int64_t stride,
                                   int64_t prime_cutoff, ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_dissect(ck_context* ctx, int64_t n, int k, int s, int theta, int64_t R, int oversample,
                                   int include_arcs, ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_moments(ck_context* ctx, int64_t P, int64_t R, int k, double t, const double* qs,
                                   size_t count, int oversample, ck_format fmt, ck_buffer* out);
CK_API ck_status ck_report_model_error(ck_context* ctx, const int64_t* ns, size_t count, int k, double r_exponent,
                                       int oversample, ck_format fmt, ck_buffer* out);

CK_API void ck_buffer_free(ck_buffer* buf);

#ifdef __cplusplus
}
#endif

#endif
