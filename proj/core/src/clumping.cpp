#include "mmcmax/clumping.hpp"

#include <cmath>
#include <numbers>

#include "math_detail.hpp"

namespace mmcmax {

namespace {

double direct_clump_rate(int c, double lambda, double mu) {
  const double gap = c * mu - lambda;
  const double num =
      std::pow(double(c), c - 2) * lambda * std::pow(mu, c - 3) * gap * gap;
  return num / detail::binomial_rate_sum(c, lambda, mu);
}

double log_clump_rate(const QueueParams& params) {
  const int c = params.servers();
  const double lambda = params.arrival_rate();
  const double mu = params.service_rate();
  const double direct = direct_clump_rate(c, lambda, mu);
  if (std::isfinite(direct) && direct > 0.0) return std::log(direct);
  const double log_num = double(c - 2) * std::log(double(c)) + std::log(lambda) +
                         double(c - 3) * std::log(mu) +
                         2.0 * std::log(c * mu - lambda);
  return log_num - detail::log_binomial_rate_sum(c, lambda, mu);
}

}  // namespace

double clump_rate_constant(const QueueParams& params) {
  params.require_stable("clump_rate_constant");
  const double direct =
      direct_clump_rate(params.servers(), params.arrival_rate(), params.service_rate());
  if (std::isfinite(direct) && direct > 0.0) return direct;
  return std::exp(log_clump_rate(params));
}

MaxCdfApprox::MaxCdfApprox(const QueueParams& params, double horizon, ApproxOrder order)
    : params_(params), horizon_(horizon), order_(order) {
  params_.require_stable("MaxCdfApprox");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw validation_error("MaxCdfApprox: horizon must be positive and finite");
  log_rate_ = log_clump_rate(params_);
  log_util_ = std::log(params_.utilization());
  log_horizon_ = std::log(horizon_);
}

ApproxValue MaxCdfApprox::cdf(int m) const {
  if (m < 0) throw validation_error("MaxCdfApprox::cdf: m must be >= 0");
  // exponent B n rho^{m+1}, assembled in log space
  double log_exponent = log_rate_ + log_horizon_ + (double(m) + 1.0) * log_util_;
  if (order_ == ApproxOrder::high) {
    const int shift = m + 2 - params_.servers();
    if (shift <= 0) return {0.0, false};
    log_exponent -= std::log1p(-std::exp(double(shift) * log_util_));
  }
  return {std::exp(-std::exp(log_exponent)), true};
}

ApproxValue MaxCdfApprox::pmf(int m) const {
  const ApproxValue at_m = cdf(m);
  if (m == 0) return at_m;
  const ApproxValue below = cdf(m - 1);
  // A flagged zero below the high-order window is a valid stand-in: the
  // true CDF there is ~0, so only m's own regime determines validity.
  double diff = at_m.value - below.value;
  bool ok = at_m.in_regime;
  if (diff < 0.0) {
    diff = 0.0;
    ok = false;
  }
  return {diff, ok};
}

GumbelMoments gumbel_moments(const QueueParams& params) {
  params.require_stable("gumbel_moments");
  const double log_ratio = -std::log(params.utilization());  // ln(c mu / lambda)
  const double slope = 1.0 / log_ratio;
  const double intercept =
      (detail::kEulerGamma + log_clump_rate(params) + std::log(params.utilization())) /
          log_ratio +
      0.5;
  const double variance =
      (std::numbers::pi * std::numbers::pi / 6.0) / (log_ratio * log_ratio) +
      1.0 / 12.0;
  return {slope, intercept, variance};
}

double mean_estimate(const QueueParams& params, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw validation_error("mean_estimate: horizon must be positive and finite");
  const GumbelMoments moments = gumbel_moments(params);
  return moments.slope * std::log(horizon) + moments.intercept;
}

}  // namespace mmcmax
