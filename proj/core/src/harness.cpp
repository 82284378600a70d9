#include "mmcmax/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mmcmax/clumping.hpp"
#include "mmcmax/rng.hpp"
#include "mmcmax/version.hpp"

namespace mmcmax {

namespace {

void validate_spec(const ExperimentSpec& spec) {
  if (spec.replicates < 1)
    throw validation_error("ExperimentSpec: replicates must be >= 1");
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
    throw validation_error("ExperimentSpec: horizon must be positive and finite");
}

// Common evaluation grid 0..m_max: the empirical support extended until
// both approximation CDFs clear 1 - 1e-9.
struct PmfTable {
  std::vector<double> empirical;
  std::vector<double> low_order;
  std::vector<double> high_order;
  bool high_out_of_regime = false;
  bool high_clamped = false;
};

PmfTable build_pmf_table(const EmpiricalMaxDistribution& empirical) {
  const ExperimentSpec& spec = empirical.spec;
  const MaxCdfApprox low(spec.params, spec.horizon, ApproxOrder::low);
  const MaxCdfApprox high(spec.params, spec.horizon, ApproxOrder::high);

  int m_max = empirical.counts.empty() ? 0 : empirical.counts.rbegin()->first;
  constexpr double kTailTol = 1e-9;
  constexpr int kSupportCap = 1 << 20;
  while ((low.cdf(m_max).value < 1.0 - kTailTol ||
          high.cdf(m_max).value < 1.0 - kTailTol) &&
         m_max < kSupportCap)
    ++m_max;
  if (m_max >= kSupportCap)
    throw numeric_limit_error("compare: approximation support did not close");

  PmfTable table;
  table.empirical.assign(std::size_t(m_max) + 1, 0.0);
  table.low_order.resize(std::size_t(m_max) + 1);
  table.high_order.resize(std::size_t(m_max) + 1);
  for (const auto& [m, count] : empirical.counts)
    table.empirical[std::size_t(m)] = double(count) / double(spec.replicates);
  for (int m = 0; m <= m_max; ++m) {
    table.low_order[std::size_t(m)] = low.pmf(m).value;
    const ApproxValue h = high.pmf(m);
    table.high_order[std::size_t(m)] = h.value;
    if (!h.in_regime) {
      if (!high.cdf(m).in_regime)
        table.high_out_of_regime = true;
      else
        table.high_clamped = true;
    }
  }
  return table;
}

void append_number(std::string& line, double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  line.append(buf, result.ptr);
}

const char* convention_name(CountConvention convention) {
  return convention == CountConvention::waiting_only ? "waiting_only" : "in_system";
}

CountConvention convention_from_name(const std::string& name) {
  if (name == "in_system") return CountConvention::in_system;
  if (name == "waiting_only") return CountConvention::waiting_only;
  throw validation_error("unknown count convention '" + name + "'");
}

}  // namespace

double EmpiricalMaxDistribution::mean() const {
  double weighted = 0.0;
  for (const auto& [m, count] : counts) weighted += double(m) * double(count);
  return weighted / double(spec.replicates);
}

double EmpiricalMaxDistribution::variance() const {
  const double center = mean();
  double weighted = 0.0;
  for (const auto& [m, count] : counts) {
    const double d = double(m) - center;
    weighted += d * d * double(count);
  }
  return weighted / double(spec.replicates);
}

EmpiricalMaxDistribution run_experiment(const ExperimentSpec& spec, unsigned workers) {
  validate_spec(spec);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::uint64_t>(workers, spec.replicates));

  // Static contiguous slices; replicate i is seeded only from
  // (master_seed, i), so the merged counts are worker-count invariant.
  std::vector<std::map<int, std::uint64_t>> partials(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (spec.replicates + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::uint64_t(w) * chunk;
    const std::uint64_t end = std::min(spec.replicates, begin + chunk);
    pool.emplace_back([&spec, &partials, w, begin, end] {
      auto& local = partials[w];
      for (std::uint64_t i = begin; i < end; ++i) {
        const SimConfig config{spec.params, spec.horizon, 0, spec.convention,
                               replicate_seed(spec.master_seed, i)};
        ++local[simulate_once(config).max_observed];
      }
    });
  }
  for (auto& worker : pool) worker.join();

  EmpiricalMaxDistribution result{spec, {}};
  for (const auto& partial : partials)
    for (const auto& [m, count] : partial) result.counts[m] += count;
  return result;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw validation_error("total_variation: pmfs must share a support");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::fabs(p[i] - q[i]);
  return 0.5 * l1;
}

ComparisonReport compare(const EmpiricalMaxDistribution& empirical) {
  validate_spec(empirical.spec);
  const PmfTable table = build_pmf_table(empirical);

  ComparisonReport report;
  report.tv_low = total_variation(table.empirical, table.low_order);
  report.tv_high = total_variation(table.empirical, table.high_order);
  report.empirical_mean = empirical.mean();
  report.empirical_variance = empirical.variance();
  report.heuristic_mean = mean_estimate(empirical.spec.params, empirical.spec.horizon);
  report.heuristic_variance = gumbel_moments(empirical.spec.params).variance;
  if (empirical.spec.convention == CountConvention::waiting_only)
    report.flags.push_back(
        "empirical counts use the waiting-only convention; the approximations "
        "assume in-system counts");
  if (table.high_out_of_regime)
    report.flags.push_back(
        "high-order cdf is outside its asymptotic regime for m <= " +
        std::to_string(empirical.spec.params.servers() - 2) + "; reported as 0");
  if (table.high_clamped)
    report.flags.push_back("high-order pmf had negative differences clamped to 0");
  return report;
}

void emit_report(const EmpiricalMaxDistribution& empirical,
                 const ComparisonReport& report, ReportFormat format,
                 std::ostream& out) {
  const PmfTable table = build_pmf_table(empirical);
  const ExperimentSpec& spec = empirical.spec;

  if (format == ReportFormat::csv) {
    std::string line = "m,empirical_pmf,low_order_pmf,high_order_pmf\n";
    out << line;
    for (std::size_t m = 0; m < table.empirical.size(); ++m) {
      line.clear();
      line += std::to_string(m);
      line += ',';
      append_number(line, table.empirical[m]);
      line += ',';
      append_number(line, table.low_order[m]);
      line += ',';
      append_number(line, table.high_order[m]);
      line += '\n';
      out << line;
    }
    return;
  }

  nlohmann::ordered_json j;
  j["tool"] = {{"name", "mmcmax"}, {"version", kVersionString}};
  nlohmann::ordered_json spec_json;
  spec_json["servers"] = spec.params.servers();
  spec_json["arrival_rate"] = spec.params.arrival_rate();
  spec_json["service_rate"] = spec.params.service_rate();
  spec_json["horizon"] = spec.horizon;
  spec_json["replicates"] = spec.replicates;
  spec_json["master_seed"] = spec.master_seed;
  spec_json["convention"] = convention_name(spec.convention);
  j["spec"] = std::move(spec_json);
  nlohmann::ordered_json counts_json = nlohmann::ordered_json::object();
  for (const auto& [m, count] : empirical.counts)
    counts_json[std::to_string(m)] = count;
  j["counts"] = std::move(counts_json);
  j["moments"] = {{"empirical_mean", report.empirical_mean},
                  {"empirical_variance", report.empirical_variance},
                  {"heuristic_mean", report.heuristic_mean},
                  {"heuristic_variance", report.heuristic_variance}};
  j["tv"] = {{"low_order", report.tv_low}, {"high_order", report.tv_high}};
  j["flags"] = report.flags;
  nlohmann::ordered_json pmf_json;
  pmf_json["empirical"] = table.empirical;
  pmf_json["low_order"] = table.low_order;
  pmf_json["high_order"] = table.high_order;
  j["pmf"] = std::move(pmf_json);
  out << j.dump(2) << '\n';
}

std::string report_filename(const ExperimentSpec& spec, ReportFormat format) {
  std::string horizon_text;
  if (spec.horizon == std::floor(spec.horizon) && std::fabs(spec.horizon) < 1e15) {
    horizon_text = std::to_string(std::int64_t(spec.horizon));
  } else {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof buf, spec.horizon);
    horizon_text.assign(buf, result.ptr);
  }
  return "mmc_c" + std::to_string(spec.params.servers()) + "_n" + horizon_text +
         "_R" + std::to_string(spec.replicates) + "_seed" +
         std::to_string(spec.master_seed) +
         (format == ReportFormat::csv ? ".csv" : ".json");
}

EmpiricalMaxDistribution load_report_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    const auto& spec_json = j.at("spec");
    const QueueParams params(spec_json.at("servers").get<int>(),
                             spec_json.at("arrival_rate").get<double>(),
                             spec_json.at("service_rate").get<double>());
    const ExperimentSpec spec{
        params, spec_json.at("horizon").get<double>(),
        spec_json.at("replicates").get<std::uint64_t>(),
        spec_json.at("master_seed").get<std::uint64_t>(),
        convention_from_name(spec_json.at("convention").get<std::string>())};
    EmpiricalMaxDistribution empirical{spec, {}};
    std::uint64_t total = 0;
    for (const auto& [key, value] : j.at("counts").items()) {
      const std::uint64_t count = value.get<std::uint64_t>();
      empirical.counts[std::stoi(key)] = count;
      total += count;
    }
    if (total != spec.replicates)
      throw validation_error("report counts do not sum to the replicate count");
    return empirical;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace mmcmax
