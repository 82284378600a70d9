#include "mmcmax/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmcmax/rng.hpp"

namespace mmcmax {

namespace {

int observed_count(int state, const SimConfig& config) {
  return config.convention == CountConvention::waiting_only
             ? std::max(0, state - config.params.servers())
             : state;
}

}  // namespace

SimResult simulate_once(const SimConfig& config) {
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon))
    throw validation_error("simulate_once: horizon must be positive and finite");
  if (config.initial_state < 0)
    throw validation_error("simulate_once: initial_state must be >= 0");

  const double lambda = config.params.arrival_rate();
  const double mu = config.params.service_rate();
  const int servers = config.params.servers();

  Xoshiro256pp rng(config.seed);
  int state = config.initial_state;
  int max_observed = observed_count(state, config);
  double clock = 0.0;
  std::uint64_t events = 0;

  while (true) {
    const double departure = double(std::min(state, servers)) * mu;
    const double total = lambda + departure;
    clock += rng.exponential(total);
    if (clock > config.horizon) break;
    const bool arrival =
        departure == 0.0 || rng.uniform_unit() * total <= lambda;
    state += arrival ? 1 : -1;
    ++events;
    max_observed = std::max(max_observed, observed_count(state, config));
  }
  return {max_observed, events, state};
}

double exact_max_cdf(const QueueParams& params, double horizon, int level,
                     int initial_state) {
  if (level < 0) throw validation_error("exact_max_cdf: level must be >= 0");
  if (initial_state < 0 || initial_state > level)
    throw validation_error("exact_max_cdf: need 0 <= initial_state <= level");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw validation_error("exact_max_cdf: horizon must be positive and finite");

  const double lambda = params.arrival_rate();
  const double mu = params.service_rate();
  const int servers = params.servers();
  const double uni_rate = lambda + double(servers) * mu;
  const double jumps_mean = uni_rate * horizon;
  if (jumps_mean > 1e5)
    throw oracle_scale_error(
        "exact_max_cdf: (lambda + c*mu) * horizon > 1e5 exceeds the oracle budget");

  // One-step kernel of the uniformized chain on 0..level; an arrival out
  // of `level` leaves the transient set and never returns.
  const int size = level + 1;
  std::vector<double> up(size), down(size), stay(size);
  for (int k = 0; k < size; ++k) {
    up[k] = lambda / uni_rate;
    down[k] = double(std::min(k, servers)) * mu / uni_rate;
    stay[k] = 1.0 - up[k] - down[k];
  }

  std::vector<double> mass(size, 0.0), next(size);
  mass[initial_state] = 1.0;

  const long max_jumps =
      long(jumps_mean + 12.0 * std::sqrt(jumps_mean + 10.0) + 80.0);
  const double log_mean = std::log(jumps_mean);
  double survival = 0.0;
  double weight_seen = 0.0;
  for (long j = 0; j <= max_jumps; ++j) {
    const double weight =
        std::exp(-jumps_mean + double(j) * log_mean - std::lgamma(double(j) + 1.0));
    double in_set = 0.0;
    for (double v : mass) in_set += v;
    survival += weight * in_set;
    weight_seen += weight;
    if (double(j) > jumps_mean && 1.0 - weight_seen < 1e-13) break;

    for (int k = 0; k < size; ++k) {
      double v = mass[k] * stay[k];
      if (k > 0) v += mass[k - 1] * up[k - 1];
      if (k + 1 < size) v += mass[k + 1] * down[k + 1];
      next[k] = v;
    }
    mass.swap(next);
  }
  return std::min(survival, 1.0);
}

}  // namespace mmcmax
