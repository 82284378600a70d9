#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mmcmax/queue_params.hpp"
#include "mmcmax/simulator.hpp"

namespace mmcmax {

struct ExperimentSpec {
  QueueParams params;
  double horizon;
  std::uint64_t replicates;
  std::uint64_t master_seed;
  CountConvention convention = CountConvention::in_system;
};

/// Integer-binned counts of the simulated maxima over all replicates.
/// Invariant: the counts sum to spec.replicates.
struct EmpiricalMaxDistribution {
  ExperimentSpec spec;
  std::map<int, std::uint64_t> counts;

  double mean() const;
  double variance() const;  // population variance of the binned sample
};

/// Discrepancies between the empirical distribution and the two
/// clumping approximations over a common support.
struct ComparisonReport {
  double tv_low = 0.0;   // total variation vs the low-order pmf
  double tv_high = 0.0;  // total variation vs the high-order pmf
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double heuristic_mean = 0.0;
  double heuristic_variance = 0.0;
  std::vector<std::string> flags;
};

/// Runs spec.replicates independent simulations (replicate i seeded by
/// replicate_seed(master_seed, i)) and bins the maxima. `workers` = 0
/// uses the hardware count; the result is identical for any worker count.
EmpiricalMaxDistribution run_experiment(const ExperimentSpec& spec,
                                        unsigned workers = 0);

/// Builds low/high-order pmfs over the empirical support extended until
/// both approximation CDFs exceed 1 - 1e-9, computes total variation
/// distances and moments, and collects validity flags. Never fails on
/// approximation regime issues; they are reported in flags.
ComparisonReport compare(const EmpiricalMaxDistribution& empirical);

/// Half the L1 distance between two pmfs of equal length; in [0, 1].
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

enum class ReportFormat { csv, json };

/// CSV: header m,empirical_pmf,low_order_pmf,high_order_pmf and one row
/// per m over the comparison support. JSON adds the experiment spec
/// (seed included), counts, moments, tv distances, flags and the tool
/// version. Output is byte-deterministic for a given empirical input.
void emit_report(const EmpiricalMaxDistribution& empirical,
                 const ComparisonReport& report, ReportFormat format,
                 std::ostream& out);

/// mmc_c{c}_n{n}_R{R}_seed{seed}.{csv|json}
std::string report_filename(const ExperimentSpec& spec, ReportFormat format);

/// Reconstructs an empirical distribution from a JSON report previously
/// written by emit_report.
EmpiricalMaxDistribution load_report_json(std::istream& in);

}  // namespace mmcmax
