#pragma once

#include <cstdint>

#include "mmcmax/queue_params.hpp"

namespace mmcmax {

/// What counts toward the running maximum: the number in system (default)
/// or only the customers waiting for a server, max(0, k - c).
enum class CountConvention { in_system, waiting_only };

struct SimConfig {
  QueueParams params;
  double horizon;
  int initial_state = 0;
  CountConvention convention = CountConvention::in_system;
  std::uint64_t seed = 0;
};

struct SimResult {
  int max_observed = 0;
  std::uint64_t events = 0;  // number of jumps in [0, horizon]
  int final_state = 0;
};

/// One exact sample path of the M/M/c birth-death chain over
/// [0, horizon]: state k holds for Exp(lambda + min(k,c) mu) and then
/// jumps up with probability lambda over that total. A state entered at a
/// jump time <= horizon counts toward the maximum. Bitwise deterministic
/// in the config (including the seed); stability is not required.
SimResult simulate_once(const SimConfig& config);

/// Exact P{max over [0, horizon] <= level | X_0 = initial_state} via
/// uniformization at rate Lambda = lambda + c mu with state level+1 made
/// absorbing; the Poisson series over jump counts is truncated at tail
/// mass 1e-13 (result accurate to ~1e-12). Guarded: requires
/// Lambda * horizon <= 1e5, else throws oracle_scale_error.
double exact_max_cdf(const QueueParams& params, double horizon, int level,
                     int initial_state = 0);

}  // namespace mmcmax
