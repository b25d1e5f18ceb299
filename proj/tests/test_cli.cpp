#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fractop/analysis.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stderr is folded into the captured output.
Run cli(const std::string& args) {
  std::string cmd = std::string("\"") + FRACTOP_CLI_PATH + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t c = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("attractor command") {
  auto r = cli("attractor --preset cmts --depth 3 --out cli_cmts3.txt");
  CHECK(r.code == 0);
  CHECK(r.out.find("cells: 8\n") != std::string::npos);
  auto file = slurp("cli_cmts3.txt");
  CHECK(count(file, "\ncell ") == 8);
  CHECK(file.find("cell 222 26/27 1/1") != std::string::npos);
  CHECK(file.find(" 2/3 ") != std::string::npos);

  auto sc = cli("attractor --preset sierpinski-carpet --depth 2");
  CHECK(sc.code == 0);
  CHECK(sc.out.find("cells: 64\n") != std::string::npos);

  auto zero = cli("attractor --preset cmts --depth 0");
  CHECK(zero.code == 0);
  CHECK(zero.out.find("cells: 1\n") != std::string::npos);
}

TEST_CASE("ifs file input") {
  {
    std::ofstream f("cli_custom.ifs");
    f << "# two-map dust\nname dust\ndimension 1\nbox 0 1\nmap diag=1/4 offset=0\nmap diag=1/4 offset=3/4\n";
  }
  auto r = cli("analyze --ifs-file cli_custom.ifs --depth 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("component_count: 8\n") != std::string::npos);
  CHECK(r.out.find("lipschitz_sum: 1/2\n") != std::string::npos);

  auto missing = cli("analyze --ifs-file does_not_exist.ifs");
  CHECK(missing.code == 2);
  auto both = cli("analyze --preset cmts --ifs-file cli_custom.ifs");
  CHECK(both.code == 2);
}

TEST_CASE("analyze matches the library report") {
  for (const char* name : {"cmts", "sierpinski-carpet", "sierpinski-gasket"}) {
    auto lib = fractop::format_report(fractop::analyze(fractop::preset(name), 2), fractop::ReportFormat::Text);
    auto r = cli(std::string("analyze --preset ") + name + " --depth 2");
    CHECK(r.code == 0);
    CHECK(r.out == lib);
    auto json = fractop::format_report(fractop::analyze(fractop::preset(name), 2), fractop::ReportFormat::Json);
    CHECK(cli(std::string("analyze --format json --preset ") + name + " --depth 2").out == json);
  }
  CHECK(cli("analyze --preset cmts --format yaml").code == 2);
}

TEST_CASE("quotient command") {
  auto ok = cli("quotient --depth 5 --iterations 2");
  CHECK(ok.code == 0);
  CHECK(count(ok.out, "passed: true") == 2);

  auto json = cli("quotient --preset cmts --depth 4 --format json");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"passed\": true") != std::string::npos);

  for (const char* name : {"sierpinski-carpet", "sierpinski-gasket"}) {
    auto r = cli(std::string("quotient --preset ") + name);
    CHECK(r.code == 4);
    CHECK(r.out.find("connected space") != std::string::npos);
  }

  auto shallow = cli("quotient --depth 1 --iterations 3");
  CHECK(shallow.code == 2);
  CHECK(shallow.out.find("need depth >= 4") != std::string::npos);
  CHECK(cli("quotient --depth 4 --y-cylinder 3").code == 2);
  CHECK(cli("quotient --depth 4 --q-word 2111").code == 2);
}

TEST_CASE("render command") {
  auto r = cli("render --preset sierpinski-carpet --depth 2 --arc 0,0 1,1 --out cli_sc2.svg");
  CHECK(r.code == 0);
  auto svg = slurp("cli_sc2.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);

  auto bars = cli("render --preset cmts --depth 4");
  CHECK(bars.code == 0);
  CHECK(count(bars.out, "<rect") == 17);  // frame plus 16 bars

  CHECK(cli("render --preset cmts --depth 3 --arc 0 1").code != 0);
}

TEST_CASE("report command") {
  auto r = cli("report --preset sierpinski-gasket --depth 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("windows             4") != std::string::npos);
  CHECK(r.out.find("unavailable") != std::string::npos);
}

TEST_CASE("determinism and limits") {
  CHECK(cli("analyze --preset sierpinski-carpet --depth 3").out ==
        cli("analyze --preset sierpinski-carpet --depth 3").out);
  CHECK(cli("quotient --depth 6 --iterations 3").out == cli("quotient --depth 6 --iterations 3").out);

  auto big = cli("attractor --preset sierpinski-carpet --depth 7");
  CHECK(big.code == 3);
  CHECK(big.out.find("2097152") != std::string::npos);
  CHECK(cli("attractor --preset cmts --depth 4 --budget 10").code == 3);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("attractor --preset koch").code == 2);
}
