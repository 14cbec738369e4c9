#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "circlekit/circlekit.h"

namespace {

struct Ctx {
  ck_context* p = nullptr;
  Ctx() { REQUIRE(ck_context_create(&p) == CK_OK); }
  ~Ctx() { ck_context_destroy(p); }
};

}  // namespace

TEST_CASE("context lifecycle and status strings") {
  CHECK(ck_context_create(nullptr) == CK_ERR_NULL);
  Ctx c;
  CHECK(ck_context_set_threads(c.p, 2) == CK_OK);
  CHECK(ck_context_set_threads(c.p, 0) == CK_ERR_DOMAIN);
  CHECK(std::strlen(ck_last_error(c.p)) > 0);
  CHECK(ck_context_set_memory_mb(c.p, 512) == CK_OK);
  CHECK(std::string(ck_status_string(CK_OK)).size() > 0);
  CHECK(std::string(ck_version()).size() > 0);
  double x = 0;
  CHECK(ck_eta(nullptr, 1.0, &x, nullptr) == CK_ERR_NULL);
  CHECK(ck_eta(c.p, 1.0, nullptr, nullptr) == CK_ERR_NULL);
  ck_context_destroy(nullptr);
  ck_buffer_free(nullptr);
}

TEST_CASE("scalar entry points") {
  Ctx c;
  double eta = 0, d = 0;
  REQUIRE(ck_eta(c.p, 1.0, &eta, &d) == CK_OK);
  CHECK(eta == doctest::Approx(0.5671432904).epsilon(1e-10));
  CHECK(d < 0);
  CHECK(ck_eta(c.p, -1.0, &eta, nullptr) == CK_ERR_DOMAIN);

  double cc = 0;
  REQUIRE(ck_constant_c(c.p, 5, &cc) == CK_OK);
  CHECK(std::abs(cc - 2.134693) < 1e-6);
  REQUIRE(ck_find_c_theta(c.p, 4, &cc) == CK_OK);
  CHECK(std::abs(cc - 1.961969) < 1e-6);
  CHECK(ck_constant_c(c.p, 3, &cc) == CK_ERR_DOMAIN);

  int64_t v = 0;
  CHECK(ck_integer_root(c.p, 1000, 3, &v) == CK_OK);
  CHECK(v == 10);
  CHECK(ck_smooth_bound(c.p, 256, 0.125, &v) == CK_OK);
  CHECK(v == 2);
  CHECK(ck_prime_pi(c.p, 1000000, &v) == CK_OK);
  CHECK(v == 78498);
  CHECK(ck_smooth_count(c.p, 10, 3, &v) == CK_OK);
  CHECK(v == 7);
  CHECK(ck_smooth_count(c.p, 10, 11, &v) == CK_ERR_DOMAIN);

  double a = 0, b = 0;
  REQUIRE(ck_chi_p(c.p, 3, 1, 2, 3, &a, &b) == CK_OK);
  CHECK(a == doctest::Approx(7.0 / 6.0));
  CHECK(b == doctest::Approx(7.0 / 6.0));
  CHECK(ck_chi_p(c.p, 9, 1, 2, 3, &a, &b) == CK_ERR_DOMAIN);
  CHECK(ck_series_partial(c.p, 100, 3, 4, 1, &a) == CK_OK);
  CHECK(a == doctest::Approx(1.0));
  REQUIRE(ck_euler_product(c.p, 100, 3, 4, 1000, &a, &b) == CK_OK);
  CHECK(a > 0);
  CHECK(b > 0);

  CHECK(ck_count_direct(c.p, 2, 2, 10, &v) == CK_OK);
  CHECK(v == 3);
  std::vector<int64_t> r(101);
  REQUIRE(ck_count_range(c.p, 2, 2, 100, r.data()) == CK_OK);
  CHECK(r[10] == 3);
  CHECK(ck_count_conjugate(c.p, 2, 2, 10, &v) == CK_OK);
  CHECK(v == 3);
  CHECK(ck_hl_prediction(c.p, 1, 1, 1000, 1.0, &a) == CK_OK);
  CHECK(a == doctest::Approx(1000 / std::log(1000.0)));
  CHECK(ck_upsilon(c.p, 1.0 / 3.0, 100, &a) == CK_OK);
  CHECK(a == doctest::Approx(1.0 / 3.0));
  CHECK(ck_singular_integral(c.p, 10000, 2, 3, 1.5, &a) == CK_OK);
  CHECK(a > 0);
  CHECK(ck_singular_integral(c.p, 100, 2, 3, 0.5, &a) == CK_ERR_DOMAIN);
  REQUIRE(ck_full_circle_integral(c.p, 20, 2, 1, 4, &a, &b) == CK_OK);
  CHECK(a == doctest::Approx(std::log(209.0)));
  CHECK(b == doctest::Approx(std::log(209.0)));
}

TEST_CASE("reports through buffers") {
  Ctx c;
  ck_buffer buf{};
  REQUIRE(ck_report_constants(c.p, 5, CK_FORMAT_JSON, &buf) == CK_OK);
  REQUIRE(buf.data != nullptr);
  CHECK(std::strlen(buf.data) == buf.size);
  CHECK(std::string(buf.data).find("2.134693") != std::string::npos);
  ck_buffer_free(&buf);
  CHECK(buf.data == nullptr);

  int all_pass = 0;
  REQUIRE(ck_report_verify_tables(c.p, nullptr, nullptr, CK_FORMAT_CSV, &buf, &all_pass) == CK_OK);
  CHECK(all_pass == 1);
  ck_buffer_free(&buf);
  CHECK(ck_report_verify_tables(c.p, "/nonexistent.csv", nullptr, CK_FORMAT_CSV, &buf, nullptr) == CK_ERR_IO);

  REQUIRE(ck_report_count(c.p, 2, 2, 10, 10, "auto", CK_FORMAT_CSV, &buf) == CK_OK);
  CHECK(std::string(buf.data) == "n,r\n10,3\n");
  ck_buffer_free(&buf);
  CHECK(ck_report_count(c.p, 2, 2, 10, 10, "bogus", CK_FORMAT_CSV, &buf) == CK_ERR_PARSE);
  CHECK(ck_report_count(c.p, 2, 2, 10, 10, nullptr, CK_FORMAT_CSV, nullptr) == CK_ERR_NULL);

  REQUIRE(ck_report_plan(c.p, 17, 5, 0, CK_FORMAT_JSON, &buf) == CK_OK);
  CHECK(std::string(buf.data).find("54") != std::string::npos);
  ck_buffer_free(&buf);
  CHECK(ck_report_plan(c.p, 2, 5, 0, CK_FORMAT_JSON, &buf) == CK_ERR_DOMAIN);

  double ts[] = {1.0, 2.0};
  REQUIRE(ck_report_eta(c.p, ts, 2, CK_FORMAT_PLAIN, &buf) == CK_OK);
  ck_buffer_free(&buf);
  REQUIRE(ck_report_sieve(c.p, 100, 10, 3, CK_FORMAT_JSON, &buf) == CK_OK);
  ck_buffer_free(&buf);
  int64_t xs[] = {8, 16};
  REQUIRE(ck_report_series(c.p, 100, 3, 4, 100, xs, 2, CK_FORMAT_JSON, &buf) == CK_OK);
  ck_buffer_free(&buf);
  REQUIRE(ck_report_compare(c.p, 2, 2, 100, 120, 5, 100, CK_FORMAT_CSV, &buf) == CK_OK);
  ck_buffer_free(&buf);
  REQUIRE(ck_report_dissect(c.p, 4096, 2, 3, 5, 2, 1, 0, CK_FORMAT_CSV, &buf) == CK_OK);
  ck_buffer_free(&buf);
  double qs[] = {1, 2};
  REQUIRE(ck_report_moments(c.p, 16, 16, 2, 4, qs, 2, 2, CK_FORMAT_JSON, &buf) == CK_OK);
  ck_buffer_free(&buf);
  int64_t ns[] = {1024};
  REQUIRE(ck_report_model_error(c.p, ns, 1, 2, 1.0, 2, CK_FORMAT_JSON, &buf) == CK_OK);
  ck_buffer_free(&buf);
}
