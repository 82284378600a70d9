#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmcmax/clumping.hpp"
#include "mmcmax/harness.hpp"
#include "mmcmax/version.hpp"

using namespace mmcmax;

namespace {

ExperimentSpec small_spec() {
  return ExperimentSpec{QueueParams(2, 1.0 / 3.0, 0.25), 300.0, 5000, 42,
                        CountConvention::in_system};
}

struct CsvTable {
  std::vector<int> m;
  std::vector<double> empirical, low_order, high_order;
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "m,empirical_pmf,low_order_pmf,high_order_pmf");
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    table.m.push_back(std::stoi(field));
    std::getline(row, field, ',');
    table.empirical.push_back(std::stod(field));
    std::getline(row, field, ',');
    table.low_order.push_back(std::stod(field));
    std::getline(row, field, ',');
    table.high_order.push_back(std::stod(field));
  }
  return table;
}

}  // namespace

TEST_CASE("a single replicate yields a single-entry count map") {
  ExperimentSpec spec = small_spec();
  spec.replicates = 1;
  const EmpiricalMaxDistribution emp = run_experiment(spec);
  CHECK(emp.counts.size() == 1);
  CHECK(emp.counts.begin()->second == 1);
}

TEST_CASE("counts sum to the replicate count and the pmf to one") {
  const EmpiricalMaxDistribution emp = run_experiment(small_spec());
  std::uint64_t total = 0;
  for (const auto& [m, count] : emp.counts) {
    CHECK(m >= 0);
    total += count;
  }
  CHECK(total == emp.spec.replicates);
  double pmf_sum = 0.0;
  for (const auto& [m, count] : emp.counts)
    pmf_sum += double(count) / double(emp.spec.replicates);
  CHECK(std::fabs(pmf_sum - 1.0) < 1e-12);
}

TEST_CASE("experiments are invariant under the worker count") {
  const ExperimentSpec spec = small_spec();
  const EmpiricalMaxDistribution serial = run_experiment(spec, 1);
  const EmpiricalMaxDistribution three = run_experiment(spec, 3);
  const EmpiricalMaxDistribution eight = run_experiment(spec, 8);
  CHECK(serial.counts == three.counts);
  CHECK(serial.counts == eight.counts);

  const ComparisonReport report = compare(serial);
  std::ostringstream a, b;
  emit_report(serial, report, ReportFormat::csv, a);
  emit_report(eight, compare(eight), ReportFormat::csv, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("total variation distance basics") {
  const std::vector<double> p{0.25, 0.5, 0.25};
  const std::vector<double> q{0.5, 0.25, 0.25};
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(p, q) == doctest::Approx(0.25));
  CHECK(total_variation(q, p) == doctest::Approx(0.25));
  CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), validation_error);
}

TEST_CASE("comparison report: ranges, moments, flags") {
  const EmpiricalMaxDistribution emp = run_experiment(small_spec());
  const ComparisonReport report = compare(emp);

  CHECK(report.tv_low >= 0.0);
  CHECK(report.tv_low <= 1.0);
  CHECK(report.tv_high >= 0.0);
  CHECK(report.tv_high <= 1.0);
  CHECK(report.empirical_mean == doctest::Approx(emp.mean()));
  CHECK(report.empirical_variance == doctest::Approx(emp.variance()));
  CHECK(report.heuristic_mean ==
        doctest::Approx(mean_estimate(emp.spec.params, emp.spec.horizon)));
  CHECK(report.heuristic_variance ==
        doctest::Approx(gumbel_moments(emp.spec.params).variance));

  // c = 2: the high-order cdf is flagged out of regime at m = 0
  bool regime_flag = false;
  for (const auto& flag : report.flags)
    if (flag.find("asymptotic regime") != std::string::npos) regime_flag = true;
  CHECK(regime_flag);
}

TEST_CASE("c = 1 in-system comparisons carry no flags") {
  const ExperimentSpec spec{QueueParams(1, 1.0 / 3.0, 0.5), 200.0, 2000, 7,
                            CountConvention::in_system};
  const ComparisonReport report = compare(run_experiment(spec));
  CHECK(report.flags.empty());
}

TEST_CASE("waiting-only experiments are flagged in the comparison") {
  ExperimentSpec spec = small_spec();
  spec.convention = CountConvention::waiting_only;
  spec.replicates = 2000;
  const ComparisonReport report = compare(run_experiment(spec));
  bool convention_flag = false;
  for (const auto& flag : report.flags)
    if (flag.find("waiting-only") != std::string::npos) convention_flag = true;
  CHECK(convention_flag);
}

TEST_CASE("CSV report: parseable, columns telescope correctly") {
  const EmpiricalMaxDistribution emp = run_experiment(small_spec());
  const ComparisonReport report = compare(emp);
  std::ostringstream out;
  emit_report(emp, report, ReportFormat::csv, out);
  const CsvTable table = parse_csv(out.str());

  REQUIRE(!table.m.empty());
  CHECK(table.m.front() == 0);
  CHECK(table.m.back() >= emp.counts.rbegin()->first);

  double emp_sum = 0.0, low_sum = 0.0, high_sum = 0.0;
  for (std::size_t i = 0; i < table.m.size(); ++i) {
    emp_sum += table.empirical[i];
    low_sum += table.low_order[i];
    high_sum += table.high_order[i];
  }
  CHECK(std::fabs(emp_sum - 1.0) < 1e-9);
  const MaxCdfApprox low(emp.spec.params, emp.spec.horizon, ApproxOrder::low);
  const MaxCdfApprox high(emp.spec.params, emp.spec.horizon, ApproxOrder::high);
  CHECK(std::fabs(low_sum - low.cdf(table.m.back()).value) < 1e-9);
  CHECK(std::fabs(high_sum - high.cdf(table.m.back()).value) < 1e-9);

  // the emitted columns reproduce the reported distances
  CHECK(total_variation(table.empirical, table.low_order) ==
        doctest::Approx(report.tv_low).epsilon(1e-12));
  CHECK(total_variation(table.empirical, table.high_order) ==
        doctest::Approx(report.tv_high).epsilon(1e-12));
}

TEST_CASE("JSON report: schema, determinism, round-trip") {
  const EmpiricalMaxDistribution emp = run_experiment(small_spec());
  const ComparisonReport report = compare(emp);

  std::ostringstream first, second;
  emit_report(emp, report, ReportFormat::json, first);
  emit_report(emp, report, ReportFormat::json, second);
  CHECK(first.str() == second.str());

  const nlohmann::json j = nlohmann::json::parse(first.str());
  CHECK(j.at("tool").at("name") == "mmcmax");
  CHECK(j.at("tool").at("version") == kVersionString);
  CHECK(j.at("spec").at("servers") == 2);
  CHECK(j.at("spec").at("master_seed") == 42);
  CHECK(j.at("spec").at("convention") == "in_system");
  CHECK(j.at("moments").contains("empirical_mean"));
  CHECK(j.at("tv").at("low_order").get<double>() ==
        doctest::Approx(report.tv_low));
  CHECK(j.at("tv").at("high_order").get<double>() ==
        doctest::Approx(report.tv_high));
  CHECK(j.contains("flags"));
  CHECK(j.at("pmf").at("empirical").size() == j.at("pmf").at("low_order").size());

  std::istringstream in(first.str());
  const EmpiricalMaxDistribution loaded = load_report_json(in);
  CHECK(loaded.counts == emp.counts);
  CHECK(loaded.spec.replicates == emp.spec.replicates);
  CHECK(loaded.spec.master_seed == emp.spec.master_seed);
  CHECK(loaded.spec.horizon == emp.spec.horizon);
}

TEST_CASE("malformed reports are rejected") {
  std::istringstream bad("{\"spec\": {}}");
  CHECK_THROWS_AS(load_report_json(bad), validation_error);
  std::istringstream not_json("not json at all");
  CHECK_THROWS_AS(load_report_json(not_json), validation_error);
}

TEST_CASE("report filenames follow the naming convention") {
  CHECK(report_filename(small_spec(), ReportFormat::csv) ==
        "mmc_c2_n300_R5000_seed42.csv");
  ExperimentSpec spec = small_spec();
  spec.horizon = 2500.0;
  spec.replicates = 100000;
  spec.master_seed = 7;
  CHECK(report_filename(spec, ReportFormat::json) ==
        "mmc_c2_n2500_R100000_seed7.json");
  spec.horizon = 12.5;
  CHECK(report_filename(spec, ReportFormat::csv) ==
        "mmc_c2_n12.5_R100000_seed7.csv");
}

TEST_CASE("experiment validation") {
  ExperimentSpec spec = small_spec();
  spec.replicates = 0;
  CHECK_THROWS_AS(run_experiment(spec), validation_error);
  spec = small_spec();
  spec.horizon = -1.0;
  CHECK_THROWS_AS(run_experiment(spec), validation_error);
}

TEST_CASE("empirical mean approaches the heuristic estimate at desk scale") {
  // moderate scale here; the full-budget check lives in the acceptance suite
  const ExperimentSpec spec{QueueParams(1, 1.0 / 3.0, 0.5), 1000.0, 20000, 42,
                            CountConvention::in_system};
  const EmpiricalMaxDistribution emp = run_experiment(spec);
  // the heuristic sits about one lattice unit below the true mean
  CHECK(std::fabs(emp.mean() - mean_estimate(spec.params, spec.horizon)) < 1.5);
  CHECK(emp.variance() > 5.0);
  CHECK(emp.variance() < 15.0);
}
