#pragma once

#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arith_core.hpp"
#include "circle_engine.hpp"
#include "counting.hpp"
#include "exponent_calculus.hpp"
#include "singular_series.hpp"

namespace circlekit {

using ojson = nlohmann::ordered_json;

enum class Format { json, csv, plain };
Format parse_format(const std::string& s);

struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;
};

// body is the JSON document; table is what CSV emits and plain prints after
// the scalar fields.
struct Report {
  std::string kind;
  ojson body = ojson::object();
  ReportTable table;
};

// Doubles rounded to 12 significant digits, recursively.
ojson round12(const ojson& v);
std::string format_double(double v);
std::string csv_quote(const std::string& field);
std::string serialize(const Report& report, Format format);

Report constants_report(int theta);
Report eta_report(std::span<const double> ts);
Report plan_report(const AdmissiblePlan& plan, const std::optional<SigmaPlan>& sigma);
Report verify_tables_report(const Table2Report& rep);
Report sieve_report(std::int64_t limit, std::int64_t P, std::int64_t R, const ResourceBudget& budget = {});
Report series_report(const SeriesReport& rep, const std::vector<LocalFactorReport>& checks);
Report count_report(int k, int s, std::int64_t n_lo, std::int64_t n_hi, const CountResult& res);
Report compare_report_doc(const CompareReport& rep);
Report dissect_report(const DissectionReport& rep, bool include_arcs);
Report moments_report(const MomentReport& rep);
Report model_error_report(const std::vector<ModelErrorReport>& reps);

}  // namespace circlekit
