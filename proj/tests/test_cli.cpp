#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(MMCMAX_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double number_after(const std::string& text, const std::string& label) {
  const auto pos = text.find(label);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + label.size()));
}

}  // namespace

TEST_CASE("approx: table plus moments for the c=1 config") {
  // truncated-decimal rates reproduce the moments to display accuracy
  const CliResult r =
      run_cli("approx --c 1 --lambda 0.3333333333 --mu 0.5 --n 1000");
  CHECK(r.exit_code == 0);
  CHECK(std::fabs(number_after(r.output, "mean      ") - 9.83) < 0.01);
  CHECK(std::fabs(number_after(r.output, "variance  ") - 10.09) < 0.01);
  CHECK(r.output.find("m,cdf,pmf") != std::string::npos);

  // the exact fraction reproduces the ten-digit constants verbatim
  const CliResult exact = run_cli("approx --c 1 --lambda 1/3 --mu 1/2 --n 1000");
  CHECK(exact.exit_code == 0);
  CHECK(exact.output.find("slope     2.4663034623") != std::string::npos);
  CHECK(exact.output.find("intercept -7.2049448811") != std::string::npos);
}

TEST_CASE("approx: unstable parameters exit 2 with the stability message") {
  const CliResult r = run_cli("approx --c 1 --lambda 1 --mu 0.5 --n 10");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("requires lambda < c*mu") != std::string::npos);
}

TEST_CASE("approx: ten-digit constants for the c=5 config") {
  const CliResult r = run_cli("approx --c 5 --lambda 1/3 --mu 1/10 --n 2500 --m-max 5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("-4.9642624490") != std::string::npos);
  // a 10-digit decimal lambda only matches to ~8 decimals
  const CliResult truncated =
      run_cli("approx --c 5 --lambda 0.3333333333 --mu 0.1 --n 2500 --m-max 5");
  CHECK(truncated.exit_code == 0);
  CHECK(truncated.output.find("intercept -4.96426244") != std::string::npos);
}

TEST_CASE("approx: fractions parse to the same output as decimals") {
  const CliResult frac = run_cli("approx --c 2 --lambda 1/3 --mu 1/4 --n 1000 --m-max 30");
  const CliResult dec =
      run_cli("approx --c 2 --lambda 0.333333333333333314829616256247 --mu 0.25 "
              "--n 1000 --m-max 30");
  CHECK(frac.exit_code == 0);
  // 1/3 as a double equals the literal above; outputs must match exactly
  CHECK(frac.output == dec.output);
}

TEST_CASE("erlang: the three models") {
  const CliResult c = run_cli("erlang --model c --c 2 --lambda 0.3333333333 --mu 0.25");
  CHECK(c.exit_code == 0);
  CHECK(c.output.find("0.533333") != std::string::npos);

  const CliResult b = run_cli("erlang --model b --c 1 --lambda 1 --mu 1");
  CHECK(b.exit_code == 0);
  CHECK(b.output.substr(0, 3) == "0.5");

  // theta -> infinity approaches the Erlang B value 8/29
  const CliResult a =
      run_cli("erlang --model a --c 2 --lambda 0.3333333333 --mu 0.25 --theta 1e8");
  CHECK(a.exit_code == 0);
  CHECK(a.output.find("0.275862") != std::string::npos);

  const CliResult bad = run_cli("erlang --model x --c 1 --lambda 1 --mu 1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("oracle: probability in (0,1), exact scale guard exits 3") {
  const CliResult r =
      run_cli("oracle --c 1 --lambda 0.3333333333 --mu 0.5 --horizon 50 --m 5");
  CHECK(r.exit_code == 0);
  const double value = std::stod(r.output);
  CHECK(value > 0.0);
  CHECK(value < 1.0);
  CHECK(std::fabs(value - 0.751399456057) < 1e-6);

  const CliResult guarded =
      run_cli("oracle --c 1 --lambda 1000 --mu 1000 --horizon 100 --m 5");
  CHECK(guarded.exit_code == 3);
  CHECK(guarded.output.find("budget") != std::string::npos);
}

TEST_CASE("simulate: JSON report, deterministic across reruns and workers") {
  const auto out_a = temp_file("mmcmax_cli_a.json");
  const auto out_b = temp_file("mmcmax_cli_b.json");
  const std::string base =
      "simulate --c 2 --lambda 1/3 --mu 1/4 --horizon 200 --replicates 3000 --seed 42 ";
  const CliResult a = run_cli(base + "--workers 1 --out " + out_a.string());
  const CliResult b = run_cli(base + "--workers 3 --out " + out_b.string());
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string text_a = slurp(out_a);
  CHECK(text_a == slurp(out_b));

  const json j = json::parse(text_a);
  CHECK(j.at("spec").at("replicates") == 3000);
  CHECK(j.at("tv").contains("low_order"));
  CHECK(j.at("tv").contains("high_order"));

  std::filesystem::remove(out_a);
  std::filesystem::remove(out_b);
}

TEST_CASE("simulate: unstable parameters are rejected before any work") {
  const CliResult r =
      run_cli("simulate --c 1 --lambda 2 --mu 1 --horizon 10 --replicates 10");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("requires lambda < c*mu") != std::string::npos);
}

TEST_CASE("compare: round-trips a stored report") {
  const auto report_path = temp_file("mmcmax_cli_roundtrip.json");
  const CliResult made =
      run_cli("simulate --c 1 --lambda 1/3 --mu 1/2 --horizon 100 --replicates 2000 "
              "--seed 7 --out " + report_path.string());
  REQUIRE(made.exit_code == 0);

  const CliResult again = run_cli("compare --in " + report_path.string());
  CHECK(again.exit_code == 0);
  const json original = json::parse(slurp(report_path));
  const json recomputed = json::parse(again.output);
  CHECK(recomputed.at("tv") == original.at("tv"));
  CHECK(recomputed.at("counts") == original.at("counts"));

  const CliResult csv =
      run_cli("compare --in " + report_path.string() + " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.output.rfind("m,empirical_pmf,low_order_pmf,high_order_pmf", 0) == 0);

  const CliResult missing = run_cli("compare --in /nonexistent/report.json");
  CHECK(missing.exit_code == 2);

  std::filesystem::remove(report_path);
}

TEST_CASE("reproduce-paper: constants verbatim and the hospital check") {
  const CliResult r = run_cli("reproduce-paper --replicates 2000 --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2.4663034623") != std::string::npos);
  for (const char* intercept : {"-7.2049448811", "-6.7552845943", "-6.2049448811",
                                "-5.6015876099", "-4.9642624490"})
    CHECK(r.output.find(intercept) != std::string::npos);
  CHECK(r.output.find("smallest mean estimate at c=1") != std::string::npos);
  CHECK(r.output.find("one fast server wins") != std::string::npos);
  CHECK(r.output.find("UNEXPECTED") == std::string::npos);
}

TEST_CASE("bad flags exit 2") {
  CHECK(run_cli("approx --c 1 --lambda abc --mu 0.5 --n 10").exit_code == 2);
  CHECK(run_cli("approx --c 1 --mu 0.5 --n 10").exit_code == 2);  // missing --lambda
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("oracle --c 1 --lambda 1/3 --mu 1/2 --horizon 10 --m 3 --initial 9")
            .exit_code == 2);
}

TEST_CASE("--help exits 0") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("simulate --help").exit_code == 0);
}
