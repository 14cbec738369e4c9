#include <doctest.h>

#include <string>
#include <vector>

#include "embedded_tables.hpp"
#include "errors.hpp"
#include "report.hpp"

using namespace circlekit;

TEST_CASE("formatting helpers") {
  CHECK(format_double(2.13469338430123456) == "2.1346933843");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e300 * 1e10) == "inf");
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
  CHECK(parse_format("csv") == Format::csv);
  CHECK_THROWS_AS(parse_format("xml"), ParseError);
  auto r = round12(ojson{{"x", 0.1 + 0.2}, {"v", {1.0 / 3.0, 7}}});
  CHECK(r["x"].get<double>() == 0.3);
  CHECK(r["v"][0].get<double>() == std::stod("0.333333333333"));
  CHECK(r["v"][1].is_number_integer());
}

TEST_CASE("serialization is deterministic and round-trips") {
  auto rep = constants_report(5);
  for (auto f : {Format::json, Format::csv, Format::plain}) CHECK(serialize(rep, f) == serialize(constants_report(5), f));
  auto text = serialize(rep, Format::json);
  CHECK(text.find("2.134693") != std::string::npos);
  auto parsed = ojson::parse(text);
  CHECK(parsed == round12(rep.body));
  CHECK(serialize(Report{rep.kind, parsed, rep.table}, Format::json) == text);
}

TEST_CASE("csv headers follow the documented columns") {
  CountResult cr;
  cr.r = {0, 0, 0, 1, 1};
  auto c = serialize(count_report(2, 2, 3, 4, cr), Format::csv);
  CHECK(c.rfind("n,r\n", 0) == 0);
  CHECK(c == "n,r\n3,1\n4,1\n");

  auto cmp = compare_report(2, 2, 100, 110, 1, 100);
  auto cs = serialize(compare_report_doc(cmp), Format::csv);
  CHECK(cs.rfind("n,r,prediction,ratio,series\n", 0) == 0);

  auto d = dissect(20000, 2, 3, 5, 2);
  auto ds = serialize(dissect_report(d, true), Format::csv);
  CHECK(ds.find("label,measure,sup_g,sup_f,contribution_abs\n") != std::string::npos);
  auto dj = ojson::parse(serialize(dissect_report(d, true), Format::json));
  bool saw_arc = false;
  for (const auto& u : dj["unions"])
    if (u.contains("arcs") && !u["arcs"].empty()) {
      const auto& a = u["arcs"][0];
      CHECK(a.contains("q"));
      CHECK(a.contains("a"));
      CHECK(a.contains("center"));
      CHECK(a.contains("half_width"));
      saw_arc = true;
    }
  CHECK(saw_arc);
}

TEST_CASE("plain and table reports") {
  auto t2 = parse_table2(embedded_table2_csv());
  auto t1 = parse_table1(embedded_table1_csv());
  auto rep = verify_tables_report(verify_table2(t2, t1));
  CHECK(rep.body["passed"] == 31);
  CHECK(rep.body["all_pass"] == true);
  auto plain = serialize(rep, Format::plain);
  CHECK(plain.find("passed: 31") != std::string::npos);
  std::size_t lines = 0, pos = 0;
  while ((pos = plain.find("\nPASS ", pos)) != std::string::npos) {
    ++lines;
    ++pos;
  }
  CHECK(lines == 31);

  std::vector<double> ts{1.0, 2.0};
  auto e = serialize(eta_report(ts), Format::csv);
  CHECK(e.find("0.567143290") != std::string::npos);
}
