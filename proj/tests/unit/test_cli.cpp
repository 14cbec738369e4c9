#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CIRCLEKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("successful commands") {
  auto c = run("constants --theta 5");
  CHECK(c.code == 0);
  CHECK(c.out.find("2.134693") != std::string::npos);

  auto n = run("count --k 2 --s 2 --n 10");
  CHECK(n.code == 0);
  CHECK(n.out.find("\"r\": 3") != std::string::npos);
  CHECK(run("count --k 2 --s 2 --n 10 --format csv").out == "n,r\n10,3\n");

  auto v = run("verify-tables --format plain");
  CHECK(v.code == 0);
  std::size_t pass = 0, pos = 0;
  while ((pos = v.out.find("\nPASS ", pos)) != std::string::npos) {
    ++pass;
    ++pos;
  }
  CHECK(pass == 31);
  CHECK(v.out.find("SKIP") != std::string::npos);
  CHECK(v.out.find("FAIL") == std::string::npos);

  CHECK(run("plan --k 17").code == 0);
  CHECK(run("eta --t 1").code == 0);
  CHECK(run("sieve --limit 100").code == 0);
}

TEST_CASE("deterministic output") {
  CHECK(run("series --n 100 --k 3 --s 4 --cutoff 200").out == run("series --n 100 --k 3 --s 4 --cutoff 200").out);
  CHECK(run("compare --k 2 --s 2 --n-lo 100 --n-hi 200 --threads 1").out ==
        run("compare --k 2 --s 2 --n-lo 100 --n-hi 200").out);
}

TEST_CASE("validation failures exit 2") {
  CHECK(run("nosuchcommand").code == 2);
  CHECK(run("count --k 2").code == 2);
  CHECK(run("plan --k 2").code == 2);
  CHECK(run("constants --theta 3").code == 2);
  CHECK(run("count --k 2 --s 2 --n 10 --method fast").code == 2);
  CHECK(run("dissect --n 100000 --k 2 --s 3 --eta 0.5").code == 2);
  CHECK(run("constants --format xml").code == 2);
}

TEST_CASE("inconsistent tables exit 3") {
  std::ifstream in(CIRCLEKIT_DATA_DIR "/table2.csv");
  REQUIRE(in.good());
  std::string header, first, rest, line;
  std::getline(in, header);
  std::getline(in, first);
  while (std::getline(in, line)) rest += line + "\n";
  // bump the printed theta=4 omega of the first row
  auto pos = first.find(",0.9335,");
  REQUIRE(pos != std::string::npos);
  first.replace(pos, 8, ",0.9435,");
  const std::string path = "cli_tampered_table2.csv";
  std::ofstream(path) << header << "\n" << first << "\n" << rest;
  auto r = run("verify-tables --table2 " + path + " --format plain");
  CHECK(r.code == 3);
  CHECK(r.out.find("FAIL") != std::string::npos);
  std::remove(path.c_str());
}
