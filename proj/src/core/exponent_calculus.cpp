#include "exponent_calculus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "embedded_tables.hpp"
#include "errors.hpp"

namespace circlekit {

const char* to_string(ExponentSource s) {
  switch (s) {
    case ExponentSource::eta_formula: return "eta_formula";
    case ExponentSource::lambda_even: return "lambda_even";
    case ExponentSource::lambda_odd_interp: return "lambda_odd_interp";
    case ExponentSource::table2_literal: return "table2_literal";
  }
  return "unknown";
}

const char* to_string(PlanSource s) {
  switch (s) {
    case PlanSource::sigma_even: return "sigma_even";
    case PlanSource::table2: return "table2";
    case PlanSource::external_result: return "external_result";
  }
  return "unknown";
}

void LambdaTable::add(int k, int u, double lambda) {
  if (k < 1 || u < 1) throw DomainError("lambda table keys must be positive");
  if (!(lambda >= u)) {
    std::ostringstream os;
    os << "lambda_" << u << " = " << lambda << " for k=" << k << " is below the diagonal bound " << u;
    throw DomainError(os.str());
  }
  entries_[{k, u}] = lambda;
}

std::optional<double> LambdaTable::find(int k, int u) const {
  auto it = entries_.find({k, u});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

LambdaTable LambdaTable::parse_tsv(const std::string& text, const std::string& origin) {
  LambdaTable tbl;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string fk, fu, fl;
    if (!std::getline(fields, fk, '\t') || !std::getline(fields, fu, '\t') ||
        !std::getline(fields, fl, '\t')) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected k<TAB>u<TAB>lambda");
    }
    try {
      std::size_t pk = 0, pu = 0, pl = 0;
      int k = std::stoi(fk, &pk);
      int u = std::stoi(fu, &pu);
      double lam = std::stod(fl, &pl);
      if (pk != fk.size() || pu != fu.size() || pl != fl.size()) throw std::invalid_argument("trailing");
      tbl.add(k, u, lam);
    } catch (const DomainError& e) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return tbl;
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
}  // namespace

LambdaTable LambdaTable::load_tsv(const std::string& path) { return parse_tsv(read_file(path), path); }

AdmissibleExponent delta_from_eta(int k, int t) {
  if (k < 3) throw DomainError("delta_from_eta requires k >= 3");
  if (t < 2) throw DomainError("delta_from_eta requires t >= 2");
  if (t % 2 != 0) throw DomainError("delta_from_eta requires even t; use the lambda interpolation route");
  return {k, static_cast<double>(t), k * eta(static_cast<double>(t) / k).eta, ExponentSource::eta_formula};
}

double delta_from_lambda_values(int k, int u, double lambda_lo, double lambda_hi) {
  if (u % 2 == 0) return lambda_lo - u + k;
  return 0.5 * (lambda_hi + lambda_lo) - u + k;
}

AdmissibleExponent delta_from_lambda(int k, int u, const LambdaTable& tbl) {
  if (u < 1) throw DomainError("delta_from_lambda requires u >= 1");
  auto need = [&](int idx) {
    auto v = tbl.find(k, idx);
    if (!v) {
      throw LookupError("lambda table has no entry for (k, u/2) = (" + std::to_string(k) + ", " +
                        std::to_string(idx) + ")");
    }
    return *v;
  };
  if (u % 2 == 0) {
    double lam = need(u / 2);
    return {k, static_cast<double>(u), delta_from_lambda_values(k, u, lam, lam), ExponentSource::lambda_even};
  }
  double hi = need((u + 1) / 2);
  double lo = (u - 1) / 2 >= 1 ? need((u - 1) / 2) : 0.0;
  return {k, static_cast<double>(u), delta_from_lambda_values(k, u, lo, hi),
          ExponentSource::lambda_odd_interp};
}

AdmissiblePlan check_conditions(int k, ThetaMode theta, double s, double t, double delta_s,
                                double delta_st) {
  if (!(s >= 1)) throw DomainError("check_conditions requires s >= 1");
  if (!(t >= 0)) throw DomainError("check_conditions requires t >= 0");
  if (t > s) throw DomainError("check_conditions requires 0 <= t <= s");
  AdmissiblePlan plan;
  plan.k = k;
  plan.theta = theta.value();
  plan.s = s;
  plan.t = t;
  plan.delta_s = delta_s;
  plan.delta_st = delta_st;
  plan.omega = t / s + theta.value() * delta_st / k;
  plan.cond1_ok = 2.0 * delta_s < k;
  plan.cond2_ok = plan.omega < 1.0;
  return plan;
}

double round_up_4dp(double x) {
  // %.15g recovers the decimal the double was parsed from, so 0.984 stays 0.984.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x * 1e4);
  double scaled = std::strtod(buf, nullptr);
  return std::ceil(scaled) / 1e4;
}

// ---- table parsing --------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int_field(const std::string& f, int line, const char* name) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(f, &pos);
    if (pos != f.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad integer in column " + name + ": '" + f + "'");
  }
}

// "1.4387" -> 14387. At most four decimals; no exponent notation.
std::int64_t parse_e4_field(const std::string& f, int line, const char* name) {
  auto fail = [&] {
    throw ParseError("line " + std::to_string(line) + ": bad 4-decimal value in column " + name + ": '" + f +
                     "'");
  };
  if (f.empty()) fail();
  std::size_t i = 0;
  bool neg = false;
  if (f[0] == '-') {
    neg = true;
    i = 1;
  }
  std::int64_t whole = 0;
  bool any = false;
  for (; i < f.size() && std::isdigit(static_cast<unsigned char>(f[i])); ++i) {
    whole = whole * 10 + (f[i] - '0');
    any = true;
  }
  std::int64_t frac = 0;
  int digits = 0;
  if (i < f.size() && f[i] == '.') {
    for (++i; i < f.size() && std::isdigit(static_cast<unsigned char>(f[i])); ++i) {
      if (++digits > 4) fail();
      frac = frac * 10 + (f[i] - '0');
      any = true;
    }
  }
  if (i != f.size() || !any) fail();
  for (; digits < 4; ++digits) frac *= 10;
  std::int64_t v = whole * 10000 + frac;
  return neg ? -v : v;
}

std::optional<Table2Block> parse_block(const std::vector<std::string>& cols, std::size_t off, int theta,
                                       int line) {
  bool all_blank = true, any_blank = false;
  for (std::size_t i = 0; i < 5; ++i) {
    if (cols[off + i].empty()) any_blank = true; else all_blank = false;
  }
  if (all_blank) return std::nullopt;
  if (any_blank) throw ParseError("line " + std::to_string(line) + ": partially blank theta=" +
                                  std::to_string(theta) + " block");
  Table2Block b;
  b.theta = theta;
  const char* sn = theta == 4 ? "s4" : "s5";
  const char* tn = theta == 4 ? "t4" : "t5";
  b.s = parse_int_field(cols[off], line, sn);
  b.t = parse_int_field(cols[off + 1], line, tn);
  b.delta_s_e4 = parse_e4_field(cols[off + 2], line, theta == 4 ? "d_s4" : "d_s5");
  b.delta_st_e4 = parse_e4_field(cols[off + 3], line, theta == 4 ? "d_s4t4" : "d_s5t5");
  b.omega_e4 = parse_e4_field(cols[off + 4], line, theta == 4 ? "om4" : "om5");
  if (b.s < 1 || b.t < 0 || b.t > b.s)
    throw ParseError("line " + std::to_string(line) + ": need 0 <= t <= s and s >= 1");
  return b;
}

}  // namespace

std::vector<Table2Row> parse_table2(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<Table2Row> rows;
  if (!std::getline(in, line)) throw ParseError("line 1: table2 is empty");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,s4,t4,d_s4,d_s4t4,om4,s5,t5,d_s5,d_s5t5,om5")
    throw ParseError("line 1: unexpected table2 header '" + line + "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split_csv_line(line);
    if (cols.size() != 11)
      throw ParseError("line " + std::to_string(lineno) + ": expected 11 columns, found " +
                       std::to_string(cols.size()));
    Table2Row row;
    row.line = lineno;
    row.k = parse_int_field(cols[0], lineno, "k");
    row.theta4 = parse_block(cols, 1, 4, lineno);
    row.theta5 = parse_block(cols, 6, 5, lineno);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Table1Row> parse_table1(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<Table1Row> rows;
  if (!std::getline(in, line)) throw ParseError("line 1: table1 is empty");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,S0,S1") throw ParseError("line 1: unexpected table1 header '" + line + "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split_csv_line(line);
    if (cols.size() != 3)
      throw ParseError("line " + std::to_string(lineno) + ": expected 3 columns, found " +
                       std::to_string(cols.size()));
    Table1Row row;
    row.k = parse_int_field(cols[0], lineno, "k");
    if (!cols[1].empty()) row.s0 = parse_int_field(cols[1], lineno, "S0");
    if (!cols[2].empty()) row.s1 = parse_int_field(cols[2], lineno, "S1");
    rows.push_back(row);
  }
  return rows;
}

std::vector<Table2Row> load_table2(const std::string& path) { return parse_table2(read_file(path)); }
std::vector<Table1Row> load_table1(const std::string& path) { return parse_table1(read_file(path)); }

// ---- verification ---------------------------------------------------------

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// omega * 1e4 = (1e4*t*k + theta*D*s) / (s*k), D the exponent in units of 1e-4
struct OmegaFraction {
  std::int64_t num;
  std::int64_t den;
};

OmegaFraction omega_e4(int k, int theta, int s, int t, std::int64_t d_e4) {
  return {10000LL * t * k + static_cast<std::int64_t>(theta) * d_e4 * s, static_cast<std::int64_t>(s) * k};
}

bool interval_consistent(int k, int theta, const Table2Block& b, std::int64_t d_e4) {
  auto hi = omega_e4(k, theta, b.s, b.t, d_e4);
  auto lo = omega_e4(k, theta, b.s, b.t, d_e4 - 1);
  std::int64_t min_ceil = floor_div(lo.num, lo.den) + 1;  // lower end is open
  std::int64_t max_ceil = ceil_div(hi.num, hi.den);
  return b.omega_e4 >= min_ceil && b.omega_e4 <= max_ceil;
}

}  // namespace

Table2Report verify_table2(const std::vector<Table2Row>& rows, const std::vector<Table1Row>& table1) {
  // Smallest printed exponent for each (k, u) across the whole table.
  std::map<std::pair<int, int>, std::int64_t> best;
  auto note_best = [&](int k, int u, std::int64_t d) {
    auto [it, inserted] = best.try_emplace({k, u}, d);
    if (!inserted && d < it->second) it->second = d;
  };
  for (const auto& row : rows) {
    for (const auto* blk : {&row.theta4, &row.theta5}) {
      if (!*blk) continue;
      note_best(row.k, (*blk)->s, (*blk)->delta_s_e4);
      note_best(row.k, (*blk)->s + (*blk)->t, (*blk)->delta_st_e4);
    }
  }

  Table2Report rep;
  for (const auto& row : rows) {
    for (int theta : {4, 5}) {
      const auto& blk = theta == 4 ? row.theta4 : row.theta5;
      BlockCheck c;
      c.k = row.k;
      c.theta = theta;
      if (!blk) {
        c.present = false;
        c.note = "blank in source table";
        ++rep.skipped;
        rep.blocks.push_back(c);
        continue;
      }
      const auto& b = *blk;
      c.present = true;
      c.omega_table_e4 = b.omega_e4;
      auto om = omega_e4(row.k, theta, b.s, b.t, b.delta_st_e4);
      c.omega_exact_e4 = static_cast<double>(om.num) / static_cast<double>(om.den);
      c.omega_ceil_e4 = ceil_div(om.num, om.den);
      c.literal_match = c.omega_ceil_e4 == b.omega_e4;
      c.interval_match = interval_consistent(row.k, theta, b, b.delta_st_e4);
      bool omega_ok = c.interval_match;
      std::int64_t used_delta = b.delta_st_e4;
      if (!omega_ok) {
        std::int64_t pooled = best.at({row.k, b.s + b.t});
        if (pooled < b.delta_st_e4 && interval_consistent(row.k, theta, b, pooled)) {
          omega_ok = true;
          c.pooled = true;
          c.pooled_delta_st_e4 = pooled;
          used_delta = pooled;
        }
      }
      c.cond1 = 2 * b.delta_s_e4 < 10000LL * row.k;
      auto used = omega_e4(row.k, theta, b.s, b.t, used_delta);
      c.cond2 = used.num < 10000LL * used.den;
      c.cond1_margin = row.k - 2.0 * b.delta_s_e4 / 1e4;
      c.cond2_margin = 1.0 - static_cast<double>(used.num) / static_cast<double>(used.den) / 1e4;
      c.pass = omega_ok && c.cond1 && c.cond2;

      std::ostringstream note;
      if (!c.literal_match && c.interval_match) {
        note << "printed exponents reproduce omega only as rounded-up values; literal recompute gives "
             << c.omega_ceil_e4;
      } else if (c.pooled) {
        note << "row exponent for u=" << b.s + b.t << " (" << b.delta_st_e4
             << "e-4) does not reproduce omega (recomputed " << c.omega_ceil_e4
             << "e-4); the smaller exponent " << c.pooled_delta_st_e4
             << "e-4 printed for the same (k, u) elsewhere in the table does";
      } else if (!omega_ok) {
        note << "omega mismatch: recomputed " << c.omega_ceil_e4 << "e-4, printed " << b.omega_e4 << "e-4";
      }
      c.note = note.str();
      if (c.pass) ++rep.passed; else ++rep.failed;
      rep.blocks.push_back(c);
    }
  }

  for (const auto& t1 : table1) {
    const Table2Row* match = nullptr;
    for (const auto& r : rows)
      if (r.k == t1.k) match = &r;
    if (!match) continue;
    auto add = [&](const char* col, std::optional<int> v1, const std::optional<Table2Block>& blk) {
      Table1Check c;
      c.k = t1.k;
      c.column = col;
      c.table1_value = v1;
      if (blk) c.table2_value = blk->s;
      // A blank on one side must be blank on the other.
      c.pass = (v1.has_value() == c.table2_value.has_value()) && (!v1 || *v1 == *c.table2_value);
      rep.table1.push_back(c);
      if (!c.pass) ++rep.failed;
    };
    add("S0", t1.s0, match->theta5);
    add("S1", t1.s1, match->theta4);
  }
  return rep;
}

// ---- plan selection -------------------------------------------------------

namespace {

AdmissiblePlan external_plan(int k, ThetaMode theta, int s, const char* note) {
  AdmissiblePlan p;
  p.k = k;
  p.theta = theta.value();
  p.s = s;
  p.t = 0;
  p.s_int = s;
  p.source = PlanSource::external_result;
  p.delta_s = std::numeric_limits<double>::quiet_NaN();
  p.delta_st = std::numeric_limits<double>::quiet_NaN();
  p.omega = std::numeric_limits<double>::quiet_NaN();
  p.note = note;
  return p;
}

}  // namespace

AdmissiblePlan plan_for_k(int k, ThetaMode theta, const std::vector<Table2Row>* table2, bool prefer_table) {
  if (k < 3) throw DomainError("plan_for_k requires k >= 3");
  if (k == 3) return external_plan(k, theta, 4, "known asymptotic formula for k=3, s=4");
  if (k == 4) return external_plan(k, theta, 6, "naive decoupling with smooth Weyl sum mean values, (k,s)=(4,6)");
  if (k == 5 && theta.value() == 5)
    return external_plan(k, theta, 9, "naive decoupling with smooth Weyl sum mean values, (k,s)=(5,9)");

  const bool use_table = k <= 16 || (prefer_table && k <= 20);
  if (use_table) {
    std::vector<Table2Row> embedded;
    if (!table2) {
      embedded = parse_table2(embedded_table2_csv());
      table2 = &embedded;
    }
    for (const auto& row : *table2) {
      if (row.k != k) continue;
      const auto& blk = theta.value() == 4 ? row.theta4 : row.theta5;
      if (!blk) break;
      auto p = check_conditions(k, theta, blk->s, blk->t, blk->delta_s_e4 / 1e4, blk->delta_st_e4 / 1e4);
      p.source = PlanSource::table2;
      p.s_int = std::max(blk->s, k + 3);
      p.note = "exponents as printed (rounded up at 4 decimals)";
      return p;
    }
    throw LookupError("table2 has no theta=" + std::to_string(theta.value()) + " block for k=" + std::to_string(k));
  }

  SigmaPlan sp = sigma_even_plan(k, theta);
  const double s = k * sp.sigma;
  const double t = static_cast<double>(sp.even_target) - s;
  const double delta_st = k * eta(static_cast<double>(sp.even_target) / k).eta;
  // |f|^s <= P^(s - u)|f|^u for u <= s, so the exponent of the largest even u <= s carries over.
  int u = static_cast<int>(std::floor(s));
  if (u % 2 != 0) --u;
  if (u < 2) throw InternalError("plan_for_k: no even moment below s");
  const double delta_s = k * eta(static_cast<double>(u) / k).eta;
  auto p = check_conditions(k, theta, s, t, delta_s, delta_st);
  p.source = PlanSource::sigma_even;
  p.s_int = std::max(static_cast<int>(std::ceil(s - 1e-12)), k + 3);
  std::ostringstream note;
  note.precision(12);
  note << "s + t = " << sp.even_target << " (even); delta_s from u = " << u;
  // same check at the integer s actually used for counting
  const int si = static_cast<int>(std::ceil(s - 1e-12));
  int ui = si % 2 == 0 ? si : si - 1;
  const auto pi = check_conditions(k, theta, si, static_cast<double>(sp.even_target - si),
                                   k * eta(static_cast<double>(ui) / k).eta, delta_st);
  note << "; integer s = " << si << ": omega = " << pi.omega << (pi.cond1_ok && pi.cond2_ok ? " ok" : " FAILS");
  p.note = note.str();
  return p;
}

}  // namespace circlekit
