#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "detlim/io.hpp"
#include "json.hpp"

namespace {

std::string cli_path() {
  const char* p = std::getenv("DETLIM_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("sample --graph /nonexistent.json").exit_code == 2);  // missing required flags
  CHECK(run("").exit_code == 2);
}

TEST_CASE("guard failures exit with 1 and name the module") {
  const std::string tmp = "/tmp/detlim_cli_bad.json";
  detlim::atomic_write(tmp, "{not json");
  CHECK(run("validate --graph " + tmp).exit_code == 1);
  CHECK(run("generate --family ust --params n=2").exit_code == 1);
  CHECK(run("tk-dist --k 1 --radius 3").exit_code == 1);  // odd radius
}

TEST_CASE("generate, validate and oracle round trip") {
  const std::string graph = "/tmp/detlim_cli_k4.json";
  CHECK(run("generate --family ust --params n=4 --out " + graph +
            " --matrix-csv /tmp/detlim_cli_k4.csv")
            .exit_code == 0);
  CHECK(count_lines(detlim::read_file("/tmp/detlim_cli_k4.csv")) == 4);  // one row per v
  auto v = run("validate --graph " + graph);
  CHECK(v.exit_code == 0);
  auto j = nlohmann::json::parse(v.out);
  CHECK(j["ok"] == true);
  CHECK(j["left_degree"] == 3);

  auto o = run("oracle --family ust --params n=4");
  CHECK(o.exit_code == 0);
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);  // meta
  CHECK(nlohmann::json::parse(line).contains("meta"));
  int entries = 0;
  while (std::getline(lines, line)) {
    auto e = nlohmann::json::parse(line);
    CHECK(e["probability"].get<double>() == doctest::Approx(1.0 / 16).epsilon(1e-9));
    ++entries;
  }
  CHECK(entries == 16);
}

TEST_CASE("sampling is reproducible per seed") {
  const std::string graph = "/tmp/detlim_cli_k5.json";
  REQUIRE(run("generate --family ust --params n=5 --out " + graph).exit_code == 0);
  auto a = run("sample --graph " + graph + " --count 20 --seed 11");
  auto b = run("sample --graph " + graph + " --count 20 --seed 11");
  auto c = run("sample --graph " + graph + " --count 20 --seed 12");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(count_lines(a.out) == 21);  // meta + 20 samples
}

TEST_CASE("tk-dist masses sum close to one") {
  auto r = run("tk-dist --k 1 --radius 2 --max-vertices 41");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  double total = 0.0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("code,", 0) == 0) continue;
    const auto comma = line.rfind(',');
    total += std::stod(line.substr(comma + 1));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));  // entries + residual
}

TEST_CASE("tree samplers emit codes") {
  auto r = run("tk-sample --k 1 --radius 2 --count 5 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 6);
  auto o = run("oneout-sample --k 1 --d 50 --radius 2 --count 5 --seed 3");
  CHECK(o.exit_code == 0);
  CHECK(count_lines(o.out) == 6);
  auto e = run("enumerate-trees --k 1 --radius 2 --max-vertices 9");
  CHECK(e.exit_code == 0);
  CHECK(count_lines(e.out) == 5);  // meta + stars c=1..4
}

TEST_CASE("experiment report") {
  auto r = run("experiment --family ust --sizes 8,12 --k 1 --radius 2 --samples 60 "
               "--roots 8 --seed 7 --threads 2 --out /tmp/detlim_cli_report.json");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(detlim::read_file("/tmp/detlim_cli_report.json"));
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["size"] == 8);
  CHECK(j["meta"]["seed"] == 7);
  for (const auto& row : j["rows"]) {
    CHECK(row["tv_to_limit"].get<double>() >= 0.0);
    CHECK(row["tv_to_limit"].get<double>() <= 1.0);
  }
  // rows identical across thread counts; whole file identical across reruns
  auto again = run("experiment --family ust --sizes 8,12 --k 1 --radius 2 --samples 60 "
                   "--roots 8 --seed 7 --threads 1 --out /tmp/detlim_cli_report2.json");
  CHECK(again.exit_code == 0);
  auto j2 = nlohmann::json::parse(detlim::read_file("/tmp/detlim_cli_report2.json"));
  CHECK(j["rows"] == j2["rows"]);
  auto rerun = run("experiment --family ust --sizes 8,12 --k 1 --radius 2 --samples 60 "
                   "--roots 8 --seed 7 --threads 2 --out /tmp/detlim_cli_report.json");
  CHECK(rerun.exit_code == 0);
  CHECK(nlohmann::json::parse(detlim::read_file("/tmp/detlim_cli_report.json")) == j);
}

TEST_CASE("spectral summary") {
  const std::string graph = "/tmp/detlim_cli_k6.json";
  REQUIRE(run("generate --family ust --params n=6 --out " + graph).exit_code == 0);
  auto r = run("spectral --graph " + graph + " --csv-out /tmp/detlim_cli_eigs.csv");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["rank"] == 5);
  CHECK(j["trace_gap"].get<double>() < 1e-8);
  CHECK(j["structured_count"] == 0);
  CHECK(count_lines(detlim::read_file("/tmp/detlim_cli_eigs.csv")) == 17);  // meta + header + 15
}
