#pragma once

#include "mmcmax/queue_params.hpp"

namespace mmcmax {

/// 1/pi_0 of the stationary M/M/c distribution, accumulated term by term:
///   sum_{j=0}^{c-1} (c rho)^j / j!  +  (c rho)^c / (c! (1 - rho)).
/// Requires rho < 1; the result is always > 1.
double pi0_inverse_series(const QueueParams& params);

/// The same quantity in closed form,
///   sum_{i=1}^{c} i! C(c-1,i-1) lambda^{c-i} mu^{i-1}
///   / ((c-1)! mu^{c-2} (c mu - lambda)),
/// equal to pi0_inverse_series by a telescoping identity. Kept as an
/// independent computation so the identity can be checked.
double pi0_inverse_closed(const QueueParams& params);

/// Erlang C: stationary probability that all c servers are busy in a
/// stable M/M/c queue.
double erlang_c_all_busy(const QueueParams& params);

/// Erlang B: blocking probability of the M/M/c/c loss system. Defined for
/// any utilization.
double erlang_b_blocking(const QueueParams& params);

/// A(x, y) = 1 + sum_{k>=1} y^k / ((x+1)(x+2)...(x+k)) for x > 0, y >= 0.
/// Terms are added until one contributes less than 1e-15 relative; a hard
/// cap of 10^6 terms throws numeric_limit_error. May return +inf if the
/// value itself overflows double range (use the log form then).
double incomplete_gamma_a(double x, double y);

/// log A(x, y), stable when A overflows.
double log_incomplete_gamma_a(double x, double y);

/// Erlang A: stationary probability that all c servers are busy under
/// exponential customer patience at rate theta,
///   A / (1/E + A - 1)   with E = erlang_b_blocking,
///                            A = A(c mu / theta, lambda / theta).
/// theta == 0 or absent dispatches to Erlang C (requires rho < 1);
/// theta == +inf dispatches to Erlang B. Throws numeric_limit_error when
/// 1/E is not representable.
double erlang_a_all_busy(const QueueParams& params);

}  // namespace mmcmax
