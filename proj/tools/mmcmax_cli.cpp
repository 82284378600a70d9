// mmcmax: approximations, exact oracles and Monte Carlo experiments for
// the maximum queue length of an M/M/c system over a finite horizon.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmcmax/clumping.hpp"
#include "mmcmax/erlang.hpp"
#include "mmcmax/harness.hpp"
#include "mmcmax/simulator.hpp"
#include "mmcmax/version.hpp"

using namespace mmcmax;

namespace {

// Rates may be decimals or exact fractions like "1/3".
double parse_real(const std::string& text, const char* flag) {
  const auto parse_part = [&](const std::string& part) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(part, &used);
    } catch (...) {
      throw validation_error(std::string(flag) + ": cannot parse '" + text + "'");
    }
    if (used != part.size())
      throw validation_error(std::string(flag) + ": cannot parse '" + text + "'");
    return value;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_part(text);
  return parse_part(text.substr(0, slash)) / parse_part(text.substr(slash + 1));
}

// Paper-style display: decimals truncated (not rounded) at 10 digits.
std::string ten_digit_display(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14f", value);
  const std::string s(buf);
  return s.substr(0, s.find('.') + 11);
}

std::string format_compact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw validation_error("cannot open output file '" + out_path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing to '" + out_path + "'");
}

CountConvention parse_convention(const std::string& name) {
  if (name == "in-system") return CountConvention::in_system;
  if (name == "waiting-only") return CountConvention::waiting_only;
  throw validation_error("--convention must be in-system or waiting-only");
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw validation_error("--format must be csv or json");
}

struct CommonQueueFlags {
  int servers = 1;
  std::string lambda_text;
  std::string mu_text;

  void attach(CLI::App* cmd) {
    cmd->add_option("--c", servers, "number of servers")->required();
    cmd->add_option("--lambda", lambda_text, "arrival rate (decimal or fraction)")
        ->required();
    cmd->add_option("--mu", mu_text, "per-server service rate (decimal or fraction)")
        ->required();
  }

  QueueParams params(std::optional<double> theta = std::nullopt) const {
    return QueueParams(servers, parse_real(lambda_text, "--lambda"),
                       parse_real(mu_text, "--mu"), theta);
  }
};

int run_approx(const CommonQueueFlags& queue, const std::string& n_text,
               const std::string& order_text, int m_max,
               const std::string& out_path) {
  const QueueParams params = queue.params();
  if (!params.stable())
    throw unstable_queue_error("approx: requires lambda < c*mu");
  const double horizon = parse_real(n_text, "--n");
  const ApproxOrder order =
      order_text == "high" ? ApproxOrder::high : ApproxOrder::low;

  const MaxCdfApprox approx(params, horizon, order);
  const GumbelMoments moments = gumbel_moments(params);

  std::ostringstream out;
  out << "# mmcmax approx: c=" << params.servers()
      << " lambda=" << format_full(params.arrival_rate())
      << " mu=" << format_full(params.service_rate()) << " n=" << format_full(horizon)
      << " order=" << (order == ApproxOrder::high ? "high" : "low") << "\n";
  out << "slope     " << ten_digit_display(moments.slope) << "\n";
  out << "intercept " << ten_digit_display(moments.intercept) << "\n";
  out << "mean      " << format_full(mean_estimate(params, horizon)) << "\n";
  out << "variance  " << format_full(moments.variance) << "\n";
  out << "m,cdf,pmf,in_regime\n";
  int last = m_max;
  if (last < 0) {
    last = 0;
    while (approx.cdf(last).value < 1.0 - 1e-9 && last < 100000) ++last;
  }
  for (int m = 0; m <= last; ++m) {
    const ApproxValue cdf = approx.cdf(m);
    const ApproxValue pmf = approx.pmf(m);
    out << m << ',' << format_full(cdf.value) << ',' << format_full(pmf.value) << ','
        << (cdf.in_regime && pmf.in_regime ? 1 : 0) << "\n";
  }
  write_output(out.str(), out_path);
  return 0;
}

int run_erlang(const CommonQueueFlags& queue, const std::string& model,
               const std::string& theta_text) {
  double value = 0.0;
  if (model == "c") {
    value = erlang_c_all_busy(queue.params());
  } else if (model == "b") {
    value = erlang_b_blocking(queue.params());
  } else if (model == "a") {
    std::optional<double> theta;
    if (!theta_text.empty()) theta = parse_real(theta_text, "--theta");
    value = erlang_a_all_busy(queue.params(theta));
  } else {
    throw validation_error("--model must be one of a, b, c");
  }
  std::cout << format_compact(value) << "\n";
  return 0;
}

int run_simulate(const CommonQueueFlags& queue, const std::string& horizon_text,
                 std::uint64_t replicates, std::uint64_t seed,
                 const std::string& convention_text, unsigned workers,
                 const std::string& format_text, const std::string& out_path) {
  const QueueParams params = queue.params();
  if (!params.stable())
    throw unstable_queue_error("simulate: requires lambda < c*mu");
  const ExperimentSpec spec{params, parse_real(horizon_text, "--horizon"), replicates,
                            seed, parse_convention(convention_text)};
  const ReportFormat format = parse_format(format_text);

  const EmpiricalMaxDistribution empirical = run_experiment(spec, workers);
  const ComparisonReport report = compare(empirical);
  std::ostringstream out;
  emit_report(empirical, report, format, out);
  write_output(out.str(), out_path);
  return 0;
}

int run_compare(const std::string& in_path, const std::string& format_text,
                const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw validation_error("cannot open input report '" + in_path + "'");
  const EmpiricalMaxDistribution empirical = load_report_json(in);
  const ComparisonReport report = compare(empirical);
  std::ostringstream out;
  emit_report(empirical, report, parse_format(format_text), out);
  write_output(out.str(), out_path);
  return 0;
}

int run_oracle(const CommonQueueFlags& queue, const std::string& horizon_text,
               int level, int initial) {
  const double value = exact_max_cdf(queue.params(),
                                     parse_real(horizon_text, "--horizon"), level,
                                     initial);
  std::cout << format_full(value) << "\n";
  return 0;
}

int run_reproduce(std::uint64_t replicates, std::uint64_t seed, unsigned workers,
                  const std::string& outdir, const std::string& format_text) {
  const ReportFormat format = parse_format(format_text);
  if (!outdir.empty()) std::filesystem::create_directories(outdir);

  std::ostringstream out;
  out << "# mmcmax reproduce-paper (R=" << replicates << ", master_seed=" << seed
      << ", convention=in-system)\n";
  out << "discrete Gumbel constants, lambda=1/3, mu=1/(2c):\n";
  for (int c = 1; c <= 5; ++c) {
    const QueueParams params(c, 1.0 / 3.0, 1.0 / (2.0 * c));
    const GumbelMoments moments = gumbel_moments(params);
    out << "  c=" << c << "  slope " << ten_digit_display(moments.slope)
        << "  intercept " << ten_digit_display(moments.intercept) << "\n";
  }

  // one fast server beats c slow ones: the mean estimate is minimized at c=1
  for (const double horizon : {1000.0, 2500.0}) {
    int best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (int c = 1; c <= 5; ++c) {
      const double mean =
          mean_estimate(QueueParams(c, 1.0 / 3.0, 1.0 / (2.0 * c)), horizon);
      if (mean < best_mean) {
        best_mean = mean;
        best = c;
      }
    }
    out << "hospital check, n=" << format_full(horizon)
        << ": smallest mean estimate at c=" << best << " (mu=" << format_full(0.5 / best)
        << ") -> " << (best == 1 ? "one fast server wins" : "UNEXPECTED") << "\n";
  }

  out << "cells:\n";
  out << "  c  n     tv_low     tv_high    emp_mean  heur_mean  emp_var  heur_var\n";
  for (const double horizon : {1000.0, 2500.0}) {
    for (int c = 1; c <= 5; ++c) {
      const ExperimentSpec spec{QueueParams(c, 1.0 / 3.0, 1.0 / (2.0 * c)), horizon,
                                replicates, seed, CountConvention::in_system};
      const EmpiricalMaxDistribution empirical = run_experiment(spec, workers);
      const ComparisonReport report = compare(empirical);
      char line[160];
      std::snprintf(line, sizeof line,
                    "  %d  %-5.0f %.6f   %.6f   %8.4f  %8.4f   %6.3f   %6.3f\n", c,
                    horizon, report.tv_low, report.tv_high, report.empirical_mean,
                    report.heuristic_mean, report.empirical_variance,
                    report.heuristic_variance);
      out << line;
      if (!outdir.empty()) {
        const std::filesystem::path path =
            std::filesystem::path(outdir) / report_filename(spec, format);
        std::ofstream file(path, std::ios::binary);
        if (!file)
          throw std::runtime_error("cannot write report file '" + path.string() + "'");
        emit_report(empirical, report, format, file);
      }
    }
  }
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum queue length of M/M/c over a finite horizon: "
               "clumping approximations, Erlang calculators, exact oracle, "
               "Monte Carlo experiments"};
  app.set_version_flag("--version", kVersionString);
  app.require_subcommand(1);

  // approx
  auto* approx_cmd =
      app.add_subcommand("approx", "print the max-CDF/pmf table and Gumbel moments");
  CommonQueueFlags approx_queue;
  approx_queue.attach(approx_cmd);
  std::string approx_n;
  std::string approx_order = "low";
  int approx_m_max = -1;
  std::string approx_out;
  approx_cmd->add_option("--n", approx_n, "time horizon")->required();
  approx_cmd->add_option("--order", approx_order, "low or high")
      ->check(CLI::IsMember({"low", "high"}));
  approx_cmd->add_option("--m-max", approx_m_max, "largest m in the table");
  approx_cmd->add_option("--out", approx_out, "write to a file instead of stdout");

  // erlang
  auto* erlang_cmd =
      app.add_subcommand("erlang", "stationary all-busy/blocking probability");
  CommonQueueFlags erlang_queue;
  erlang_queue.attach(erlang_cmd);
  std::string erlang_model;
  std::string erlang_theta;
  erlang_cmd->add_option("--model", erlang_model, "a, b or c")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c"}));
  erlang_cmd->add_option("--theta", erlang_theta,
                         "abandonment rate (model a; decimal, fraction or inf)");

  // simulate
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "run a replicated experiment and emit a comparison report");
  CommonQueueFlags simulate_queue;
  simulate_queue.attach(simulate_cmd);
  std::string simulate_horizon;
  std::uint64_t simulate_replicates = 100000;
  std::uint64_t simulate_seed = 42;
  std::string simulate_convention = "in-system";
  unsigned simulate_workers = 0;
  std::string simulate_format = "json";
  std::string simulate_out;
  simulate_cmd->add_option("--horizon", simulate_horizon, "time horizon")->required();
  simulate_cmd->add_option("--replicates", simulate_replicates, "number of replicates");
  simulate_cmd->add_option("--seed", simulate_seed, "master seed");
  simulate_cmd->add_option("--convention", simulate_convention,
                           "in-system or waiting-only")
      ->check(CLI::IsMember({"in-system", "waiting-only"}));
  simulate_cmd->add_option("--workers", simulate_workers, "worker threads (0 = auto)");
  simulate_cmd->add_option("--format", simulate_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate_cmd->add_option("--out", simulate_out, "write to a file instead of stdout");

  // compare
  auto* compare_cmd = app.add_subcommand(
      "compare", "recompute a comparison report from a stored JSON report");
  std::string compare_in;
  std::string compare_format = "json";
  std::string compare_out;
  compare_cmd->add_option("--in", compare_in, "JSON report produced by simulate")
      ->required();
  compare_cmd->add_option("--format", compare_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  compare_cmd->add_option("--out", compare_out, "write to a file instead of stdout");

  // oracle
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "exact P{max <= m} by uniformization (small horizons)");
  CommonQueueFlags oracle_queue;
  oracle_queue.attach(oracle_cmd);
  std::string oracle_horizon;
  int oracle_m = 0;
  int oracle_initial = 0;
  oracle_cmd->add_option("--horizon", oracle_horizon, "time horizon")->required();
  oracle_cmd->add_option("--m", oracle_m, "level whose CDF value is wanted")
      ->required();
  oracle_cmd->add_option("--initial", oracle_initial, "initial state (default 0)");

  // reproduce-paper
  auto* reproduce_cmd = app.add_subcommand(
      "reproduce-paper",
      "run all ten (n, c) experiment cells and print the comparison table");
  std::uint64_t reproduce_replicates = 100000;
  std::uint64_t reproduce_seed = 42;
  unsigned reproduce_workers = 0;
  std::string reproduce_outdir;
  std::string reproduce_format = "csv";
  reproduce_cmd->add_option("--replicates", reproduce_replicates,
                            "replicates per cell (default 100000)");
  reproduce_cmd->add_option("--seed", reproduce_seed, "master seed");
  reproduce_cmd->add_option("--workers", reproduce_workers, "worker threads (0 = auto)");
  reproduce_cmd->add_option("--outdir", reproduce_outdir,
                            "also write one report per cell into this directory");
  reproduce_cmd->add_option("--format", reproduce_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(approx_cmd))
      return run_approx(approx_queue, approx_n, approx_order, approx_m_max, approx_out);
    if (app.got_subcommand(erlang_cmd))
      return run_erlang(erlang_queue, erlang_model, erlang_theta);
    if (app.got_subcommand(simulate_cmd))
      return run_simulate(simulate_queue, simulate_horizon, simulate_replicates,
                          simulate_seed, simulate_convention, simulate_workers,
                          simulate_format, simulate_out);
    if (app.got_subcommand(compare_cmd))
      return run_compare(compare_in, compare_format, compare_out);
    if (app.got_subcommand(oracle_cmd))
      return run_oracle(oracle_queue, oracle_horizon, oracle_m, oracle_initial);
    if (app.got_subcommand(reproduce_cmd))
      return run_reproduce(reproduce_replicates, reproduce_seed, reproduce_workers,
                           reproduce_outdir, reproduce_format);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
