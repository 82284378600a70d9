#pragma once

#include "mmcmax/queue_params.hpp"

namespace mmcmax {

enum class ApproxOrder { low, high };

/// A probability plus a validity marker. `in_regime` is false when the
/// high-order form was evaluated below its asymptotic window (m <= c-2,
/// where its braced denominator is nonpositive) or when a pmf difference
/// had to be clamped; the reported value is then 0.
struct ApproxValue {
  double value = 0.0;
  bool in_regime = true;
};

/// Heuristic moments of the running maximum M_n:
///   E[M_n] ~ slope * ln(n) + intercept,   Var[M_n] ~ variance,
/// with slope = 1/ln(c mu / lambda) and a horizon-independent variance.
struct GumbelMoments {
  double slope = 0.0;
  double intercept = 0.0;
  double variance = 0.0;
};

/// Clump-rate prefactor of the maximum-CDF approximation,
///   B = c^{c-2} lambda mu^{c-3} (c mu - lambda)^2
///       / sum_{j=1}^{c} j! C(c-1,j-1) lambda^{c-j} mu^{j-1}.
/// Requires rho < 1.
double clump_rate_constant(const QueueParams& params);

/// Evaluatable approximation of P{M_n <= m}, where M_n is the maximum
/// number in system over [0, horizon]. At integer m the low-order form is
///   exp[-B * n * rho^{m+1}],
/// and the high-order form divides the exponent by (1 - rho^{m+2-c}),
/// which is positive exactly when m >= c-1. Exponents are assembled in
/// log space so large m or n cannot underflow prematurely.
class MaxCdfApprox {
 public:
  MaxCdfApprox(const QueueParams& params, double horizon, ApproxOrder order);

  /// P{M_n <= m}. Strictly increasing in m, -> 1 as m -> infinity.
  ApproxValue cdf(int m) const;

  /// cdf(m) - cdf(m-1) with cdf(-1) := 0. Negative high-order differences
  /// are clamped to 0 and flagged (the low-order CDF is monotone, so its
  /// pmf is nonnegative by construction).
  ApproxValue pmf(int m) const;

  const QueueParams& params() const { return params_; }
  double horizon() const { return horizon_; }
  ApproxOrder order() const { return order_; }

 private:
  QueueParams params_;
  double horizon_;
  ApproxOrder order_;
  double log_rate_;     // ln B
  double log_util_;     // ln rho
  double log_horizon_;  // ln n
};

/// Slope/intercept of the E[M_n] estimate and the horizon-independent
/// variance estimate. Requires rho < 1.
GumbelMoments gumbel_moments(const QueueParams& params);

/// slope * ln(horizon) + intercept.
double mean_estimate(const QueueParams& params, double horizon);

}  // namespace mmcmax
