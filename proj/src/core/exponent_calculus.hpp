#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "special_functions.hpp"

namespace circlekit {

enum class ExponentSource { eta_formula, lambda_even, lambda_odd_interp, table2_literal };

const char* to_string(ExponentSource s);

struct AdmissibleExponent {
  int k = 0;
  double t = 0.0;
  double delta = 0.0;
  ExponentSource source = ExponentSource::eta_formula;
};

// Permissible exponents lambda_u for the 2u-th moment, keyed by (k, u).
class LambdaTable {
 public:
  // Rejects lambda < u, the diagonal lower bound.
  void add(int k, int u, double lambda);
  std::optional<double> find(int k, int u) const;
  std::size_t size() const { return entries_.size(); }

  // Tab-separated "k<TAB>u<TAB>lambda" lines; '#' starts a comment line.
  static LambdaTable load_tsv(const std::string& path);
  static LambdaTable parse_tsv(const std::string& text, const std::string& origin = "<memory>");

 private:
  std::map<std::pair<int, int>, double> entries_;
};

enum class PlanSource { sigma_even, table2, external_result };

const char* to_string(PlanSource s);

struct AdmissiblePlan {
  int k = 0;
  int theta = 5;
  double s = 0.0;
  double t = 0.0;
  double delta_s = 0.0;
  double delta_st = 0.0;
  double omega = 0.0;
  bool cond1_ok = false;
  bool cond2_ok = false;
  PlanSource source = PlanSource::table2;
  // Smallest natural number of k-th powers the plan supports: max(ceil(s), k + 3)
  // for the analytic routes, or the literal value for external results.
  int s_int = 0;
  std::string note;
};

// Exponent k * Eta(t/k) for even t >= 2.
AdmissibleExponent delta_from_eta(int k, int t);

// Even u: lambda_{u/2} - u + k. Odd u: mean of the neighbouring lambdas - u + k.
AdmissibleExponent delta_from_lambda(int k, int u, const LambdaTable& tbl);
double delta_from_lambda_values(int k, int u, double lambda_lo, double lambda_hi);

AdmissiblePlan check_conditions(int k, ThetaMode theta, double s, double t, double delta_s,
                                double delta_st);

// Smallest multiple of 1e-4 that is >= x, computed on the decimal digits so
// values that are exact at 4 places stay put.
double round_up_4dp(double x);

// ---- shipped tables ------------------------------------------------------

// Exponents are kept as integer multiples of 1e-4, exactly as printed.
struct Table2Block {
  int theta = 0;
  int s = 0;
  int t = 0;
  std::int64_t delta_s_e4 = 0;
  std::int64_t delta_st_e4 = 0;
  std::int64_t omega_e4 = 0;
};

struct Table2Row {
  int k = 0;
  int line = 0;
  std::optional<Table2Block> theta4;
  std::optional<Table2Block> theta5;
};

struct Table1Row {
  int k = 0;
  std::optional<int> s0;
  std::optional<int> s1;
};

std::vector<Table2Row> parse_table2(const std::string& text);
std::vector<Table1Row> parse_table1(const std::string& text);
std::vector<Table2Row> load_table2(const std::string& path);
std::vector<Table1Row> load_table1(const std::string& path);

struct BlockCheck {
  int k = 0;
  int theta = 0;
  bool present = false;
  bool pass = false;
  // omega recomputed from the block's own exponent, exact rational, in units of 1e-4
  double omega_exact_e4 = 0.0;
  std::int64_t omega_ceil_e4 = 0;
  std::int64_t omega_table_e4 = 0;
  bool literal_match = false;
  // the printed exponents are rounded up, so the true value lies in
  // (printed - 1e-4, printed]; this checks the printed omega against that range
  bool interval_match = false;
  bool pooled = false;
  std::int64_t pooled_delta_st_e4 = 0;
  bool cond1 = false;
  bool cond2 = false;
  double cond1_margin = 0.0;  // k - 2*delta_s
  double cond2_margin = 0.0;  // 1 - omega
  std::string note;
};

struct Table1Check {
  int k = 0;
  std::string column;
  std::optional<int> table1_value;
  std::optional<int> table2_value;
  bool pass = false;
};

struct Table2Report {
  std::vector<BlockCheck> blocks;
  std::vector<Table1Check> table1;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  bool all_pass() const { return failed == 0; }
};

Table2Report verify_table2(const std::vector<Table2Row>& rows, const std::vector<Table1Row>& table1);

// k >= 17: analytic route through sigma_even_plan; 5 <= k <= 16: table row;
// k in {3, 4} (and k = 5 with theta = 5): literal small-k results.
// prefer_table lets 17 <= k <= 20 return the table row instead.
AdmissiblePlan plan_for_k(int k, ThetaMode theta, const std::vector<Table2Row>* table2 = nullptr,
                          bool prefer_table = false);

}  // namespace circlekit
