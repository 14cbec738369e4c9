#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "special_functions.hpp"

namespace circlekit {

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "plain") return Format::plain;
  throw ParseError("unknown output format '" + s + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ojson round12(const ojson& v) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) return nullptr;
    return std::stod(format_double(d));
  }
  if (v.is_array()) {
    ojson out = ojson::array();
    for (const auto& e : v) out.push_back(round12(e));
    return out;
  }
  if (v.is_object()) {
    ojson out = ojson::object();
    for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = round12(it.value());
    return out;
  }
  return v;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string cell_text(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  return v.dump();
}

std::string scalar_text(const ojson& v) {
  if (v.is_array() || v.is_object()) return round12(v).dump();
  return cell_text(v);
}

}  // namespace

std::string serialize(const Report& report, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::json:
      os << round12(report.body).dump(2) << '\n';
      break;
    case Format::csv: {
      for (std::size_t i = 0; i < report.table.columns.size(); ++i)
        os << (i ? "," : "") << csv_quote(report.table.columns[i]);
      os << '\n';
      for (const auto& row : report.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_quote(cell_text(row[i]));
        os << '\n';
      }
      break;
    }
    case Format::plain: {
      for (auto it = report.body.begin(); it != report.body.end(); ++it) {
        if (it.value().is_array() && !it.value().empty() && it.value().front().is_object()) continue;
        os << it.key() << ": " << scalar_text(it.value()) << '\n';
      }
      // name/value tables repeat the scalar lines above
      const bool kv = report.table.columns == std::vector<std::string>{"name", "value"};
      if (!report.table.rows.empty() && !kv) {
        os << '\n';
        for (std::size_t i = 0; i < report.table.columns.size(); ++i)
          os << (i ? " " : "") << report.table.columns[i];
        os << '\n';
        for (const auto& row : report.table.rows) {
          for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << cell_text(row[i]);
          os << '\n';
        }
      }
      break;
    }
  }
  return os.str();
}

// ---- builders ----------------------------------------------------------------

namespace {

// copies table rows into body[key] as objects
void table_into_body(Report& r, const std::string& key) {
  ojson arr = ojson::array();
  for (const auto& row : r.table.rows) {
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < row.size() && i < r.table.columns.size(); ++i) obj[r.table.columns[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  r.body[key] = std::move(arr);
}

ojson opt_json(const std::optional<int>& v) { return v ? ojson(*v) : ojson(nullptr); }

}  // namespace

Report constants_report(int theta) {
  ThetaMode mode(theta);
  Report r;
  r.kind = "constants";
  const double c = solve_transcendental_constant(mode);
  const double c_e = find_c_theta(mode);
  const double c1 = eta_level_constant(mode);
  r.body["theta"] = theta;
  r.body["c"] = c;
  r.body["c_from_E"] = c_e;
  r.body["c_agreement"] = std::abs(c - c_e);
  r.body["c1"] = c1;
  r.body["eta_at_c1"] = eta(c1).eta;
  r.body["tau_at_c"] = tau_of_sigma(c, mode);
  r.body["E_at_c"] = big_e(c, mode);
  r.table.columns = {"name", "value"};
  for (auto it = r.body.begin(); it != r.body.end(); ++it) r.table.rows.push_back({it.key(), it.value()});
  return r;
}

Report eta_report(std::span<const double> ts) {
  Report r;
  r.kind = "eta";
  r.table.columns = {"t", "eta", "eta_prime", "residual"};
  for (double t : ts) {
    auto p = eta(t);
    const double res = p.eta + std::log(p.eta) - (1.0 - t);
    r.table.rows.push_back({t, p.eta, p.eta_prime, res});
  }
  table_into_body(r, "points");
  return r;
}

Report plan_report(const AdmissiblePlan& plan, const std::optional<SigmaPlan>& sigma) {
  Report r;
  r.kind = "plan";
  r.body["k"] = plan.k;
  r.body["theta"] = plan.theta;
  r.body["source"] = to_string(plan.source);
  r.body["s"] = plan.s;
  r.body["t"] = plan.t;
  r.body["delta_s"] = plan.delta_s;
  r.body["delta_st"] = plan.delta_st;
  r.body["omega"] = plan.omega;
  r.body["cond1_ok"] = plan.cond1_ok;
  r.body["cond2_ok"] = plan.cond2_ok;
  r.body["s_int"] = plan.s_int;
  r.body["note"] = plan.note;
  if (sigma) {
    r.body["sigma"] = sigma->sigma;
    r.body["tau"] = sigma->tau;
    r.body["even_target"] = sigma->even_target;
    r.body["image_lo"] = sigma->image_lo;
    r.body["image_hi"] = sigma->image_hi;
    r.body["tau_drop"] = sigma->tau_drop;
  }
  r.table.columns = {"name", "value"};
  for (auto it = r.body.begin(); it != r.body.end(); ++it) r.table.rows.push_back({it.key(), it.value()});
  return r;
}

Report verify_tables_report(const Table2Report& rep) {
  Report r;
  r.kind = "verify-tables";
  r.table.columns = {"status", "k", "theta", "omega_printed_e4", "omega_recomputed_e4", "literal_match",
                     "interval_match", "pooled_delta_st_e4", "cond1_margin", "cond2_margin", "note"};
  for (const auto& b : rep.blocks) {
    const char* status = !b.present ? "SKIP" : (b.pass ? "PASS" : "FAIL");
    r.table.rows.push_back({status, b.k, b.theta, b.present ? ojson(b.omega_table_e4) : ojson(nullptr),
                            b.present ? ojson(b.omega_exact_e4) : ojson(nullptr), b.literal_match, b.interval_match,
                            b.pooled ? ojson(b.pooled_delta_st_e4) : ojson(nullptr),
                            b.present ? ojson(b.cond1_margin) : ojson(nullptr),
                            b.present ? ojson(b.cond2_margin) : ojson(nullptr), b.note});
  }
  r.body["passed"] = rep.passed;
  r.body["failed"] = rep.failed;
  r.body["skipped"] = rep.skipped;
  r.body["all_pass"] = rep.all_pass();
  table_into_body(r, "blocks");
  ojson t1 = ojson::array();
  for (const auto& c : rep.table1) {
    t1.push_back({{"k", c.k},
                  {"column", c.column},
                  {"table1", opt_json(c.table1_value)},
                  {"table2", opt_json(c.table2_value)},
                  {"pass", c.pass}});
  }
  r.body["table1_cross_check"] = std::move(t1);
  return r;
}

Report sieve_report(std::int64_t limit, std::int64_t P, std::int64_t R, const ResourceBudget& budget) {
  Report r;
  r.kind = "sieve";
  auto primes = sieve_primes(limit, budget);
  r.body["limit"] = limit;
  r.body["prime_pi"] = primes.prime_pi(limit);
  r.body["chebyshev_theta"] = primes.chebyshev_theta(limit);
  if (P > 0) {
    auto set = smooth_set(P, std::min(R, P), budget);
    r.body["P"] = P;
    r.body["R"] = std::min(R, P);
    r.body["smooth_count"] = static_cast<std::int64_t>(set.cardinality());
    r.body["smooth_density"] = static_cast<double>(set.cardinality()) / static_cast<double>(P);
  }
  r.table.columns = {"name", "value"};
  for (auto it = r.body.begin(); it != r.body.end(); ++it) r.table.rows.push_back({it.key(), it.value()});
  return r;
}

Report series_report(const SeriesReport& rep, const std::vector<LocalFactorReport>& checks) {
  Report r;
  r.kind = "series";
  r.body["n"] = rep.n;
  r.body["k"] = rep.k;
  r.body["s"] = rep.s;
  r.body["cutoff"] = rep.prime_cutoff;
  r.body["product"] = rep.product_value;
  r.body["tail_bound"] = rep.tail_bound;
  r.body["tail_constant"] = rep.tail_constant;
  r.body["min_chi"] = rep.min_chi;
  r.body["nonpositive_factor"] = rep.nonpositive_factor;
  r.body["convergence_guaranteed"] = rep.convergence_guaranteed;
  r.body["max_imag_residue"] = rep.max_imag_residue;
  r.body["empirical_p0"] = rep.empirical_p0;
  r.body["dual_route_checks"] = static_cast<std::int64_t>(checks.size());
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, std::abs(c.chi_via_snp - c.chi_via_mp));
  r.body["dual_route_max_gap"] = worst;
  ojson parts = ojson::array();
  r.table.columns = {"X", "value", "imag_residue"};
  for (const auto& p : rep.partials) {
    parts.push_back(ojson::array({p.x, p.value}));
    r.table.rows.push_back({p.x, p.value, p.imag_residue});
  }
  r.body["partials"] = std::move(parts);
  return r;
}

Report count_report(int k, int s, std::int64_t n_lo, std::int64_t n_hi, const CountResult& res) {
  Report r;
  r.kind = "count";
  r.body["k"] = k;
  r.body["s"] = s;
  r.body["n_lo"] = n_lo;
  r.body["n_hi"] = n_hi;
  r.body["method"] = to_string(res.used);
  r.body["fell_back"] = res.fell_back;
  r.body["max_residue"] = res.max_residue;
  r.table.columns = {"n", "r"};
  for (std::int64_t n = n_lo; n <= n_hi; ++n) r.table.rows.push_back({n, res.r[static_cast<std::size_t>(n)]});
  if (n_lo == n_hi) r.body["r"] = res.r[static_cast<std::size_t>(n_lo)];
  table_into_body(r, "rows");
  return r;
}

Report compare_report_doc(const CompareReport& rep) {
  Report r;
  r.kind = "compare";
  r.body["k"] = rep.k;
  r.body["s"] = rep.s;
  r.body["n_lo"] = rep.n_lo;
  r.body["n_hi"] = rep.n_hi;
  r.body["stride"] = rep.stride;
  r.body["prime_cutoff"] = rep.prime_cutoff;
  r.body["method"] = to_string(rep.method);
  r.body["prediction_note"] = rep.note;
  r.body["rows_count"] = static_cast<std::int64_t>(rep.rows.size());
  r.body["min_ratio"] = rep.min_ratio;
  r.body["mean_ratio"] = rep.mean_ratio;
  r.body["min_order_ratio"] = rep.min_order_ratio;
  r.body["zero_count"] = rep.zero_count;
  r.body["zero_n"] = rep.zero_ns;
  r.body["total_r"] = rep.total_r;
  r.body["total_prediction"] = rep.total_prediction;
  r.table.columns = {"n", "r", "prediction", "ratio", "series"};
  for (const auto& row : rep.rows) r.table.rows.push_back({row.n, row.r, row.prediction, row.ratio, row.series_value});
  table_into_body(r, "rows");
  return r;
}

namespace {

ojson ledger_json(const LevelPartition& p) {
  ojson classes = ojson::array();
  for (const auto& c : p.classes) {
    classes.push_back({{"label", c.label},
                       {"threshold", c.threshold},
                       {"points", static_cast<std::int64_t>(c.indices.size())},
                       {"measure", c.measure},
                       {"sup_g", c.sup_g},
                       {"sup_f", c.sup_f},
                       {"contribution_abs", c.contribution_abs}});
  }
  return {{"base", p.base},
          {"base_measure", p.base_measure},
          {"base_grid_measure", p.base_grid_measure},
          {"class_measure_sum", p.class_measure_sum},
          {"warnings", p.warnings},
          {"classes", std::move(classes)}};
}

void ledger_rows(Report& r, const LevelPartition& p) {
  for (const auto& c : p.classes)
    r.table.rows.push_back({p.base + ":" + c.label, c.measure, c.sup_g, c.sup_f, c.contribution_abs});
}

}  // namespace

Report dissect_report(const DissectionReport& rep, bool include_arcs) {
  Report r;
  r.kind = "dissect";
  r.body["n"] = rep.n;
  r.body["k"] = rep.k;
  r.body["s"] = rep.s;
  r.body["theta"] = rep.theta;
  r.body["P"] = rep.P;
  r.body["R"] = rep.R;
  r.body["grid_size"] = rep.grid_size;
  r.body["all_disjoint"] = rep.all_disjoint;
  r.body["partition_defect"] = rep.partition_defect;
  r.body["sup_g_minor"] = rep.sup_g_minor;
  r.body["C_g"] = rep.c_g;
  r.body["C_g_upsilon"] = rep.c_g_upsilon;
  r.body["C_weyl"] = rep.c_weyl;
  ojson unions = ojson::array();
  for (const auto& u : rep.unions) {
    ojson e = {{"name", u.name()},
               {"label", to_string(u.label())},
               {"intervals", static_cast<std::int64_t>(u.intervals().size())},
               {"measure", u.measure()},
               {"disjoint", u.disjoint()}};
    if (include_arcs && !u.arcs().empty()) {
      ojson arcs = ojson::array();
      for (const auto& a : u.arcs())
        arcs.push_back({{"q", a.q}, {"a", a.a}, {"center", a.center()}, {"half_width", a.half_width}});
      e["arcs"] = std::move(arcs);
    }
    unions.push_back(std::move(e));
  }
  r.body["unions"] = std::move(unions);
  r.body["size_ledger"] = ledger_json(rep.size_ledger);
  ojson heights = ojson::array();
  for (const auto& h : rep.height_ledgers) heights.push_back(ledger_json(h));
  r.body["height_ledgers"] = std::move(heights);
  r.table.columns = {"label", "measure", "sup_g", "sup_f", "contribution_abs"};
  ledger_rows(r, rep.size_ledger);
  for (const auto& h : rep.height_ledgers) ledger_rows(r, h);
  return r;
}

Report moments_report(const MomentReport& rep) {
  Report r;
  r.kind = "moments";
  r.body["P"] = rep.P;
  r.body["R"] = rep.R;
  r.body["k"] = rep.k;
  r.body["t"] = rep.t;
  r.body["grid_size"] = rep.grid_size;
  r.body["f0"] = rep.f0;
  r.body["full_circle"] = rep.full_circle;
  r.body["reference_slope"] = rep.reference_slope;
  r.body["below_bound_range"] = rep.below_bound_range;
  if (rep.R == 1) r.body["warning"] = "R = 1 leaves only x = 1 in the smooth set, so every moment is trivial; pass a larger --R";
  r.table.columns = {"Q", "V", "boundary_error", "measure", "points", "doubling_slope"};
  for (const auto& row : rep.rows) {
    r.table.rows.push_back({row.Q, row.value, row.boundary_error, row.measure, row.points,
                            row.doubling_slope ? ojson(*row.doubling_slope) : ojson(nullptr)});
  }
  table_into_body(r, "rows");
  return r;
}

Report model_error_report(const std::vector<ModelErrorReport>& reps) {
  Report r;
  r.kind = "model-error";
  r.table.columns = {"n", "k", "P", "R", "rho_hat", "n_height", "points", "sup_error", "normalized"};
  for (const auto& m : reps)
    r.table.rows.push_back({m.n, m.k, m.P, m.R, m.rho_hat, m.n_height, m.points, m.sup_error, m.normalized});
  bool decreasing = reps.size() >= 2;
  for (std::size_t i = 1; i < reps.size(); ++i) decreasing = decreasing && reps[i].normalized < reps[i - 1].normalized;
  r.body["decreasing"] = decreasing;
  table_into_body(r, "rows");
  return r;
}

}  // namespace circlekit
