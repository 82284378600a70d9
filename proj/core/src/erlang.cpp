#include "mmcmax/erlang.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "math_detail.hpp"

namespace mmcmax {

QueueParams::QueueParams(int servers, double arrival_rate, double service_rate,
                         std::optional<double> abandonment_rate)
    : servers_(servers),
      arrival_rate_(arrival_rate),
      service_rate_(service_rate),
      abandonment_rate_(abandonment_rate) {
  if (servers_ < 1) throw validation_error("QueueParams: servers must be >= 1");
  if (!(arrival_rate_ > 0.0) || !std::isfinite(arrival_rate_))
    throw validation_error("QueueParams: arrival rate must be positive and finite");
  if (!(service_rate_ > 0.0) || !std::isfinite(service_rate_))
    throw validation_error("QueueParams: service rate must be positive and finite");
  if (abandonment_rate_ && (!(*abandonment_rate_ >= 0.0) || std::isnan(*abandonment_rate_)))
    throw validation_error("QueueParams: abandonment rate must be >= 0");
}

void QueueParams::require_stable(const char* operation) const {
  if (!stable())
    throw unstable_queue_error(std::string(operation) +
                               ": unstable queue, requires lambda < c*mu");
}

namespace {

constexpr std::size_t kSeriesTermCap = 1'000'000;
constexpr double kSeriesRelTol = 1e-15;

// log of sum_{j=0}^{c-1} a^j/j! + a^c/(c!(1-rho)), a = c rho.
double log_pi0_inverse_series(int c, double a, double rho) {
  std::vector<double> log_terms;
  log_terms.reserve(std::size_t(c) + 1);
  double t = 0.0;  // log(a^0 / 0!)
  log_terms.push_back(t);
  for (int j = 1; j < c; ++j) {
    t += std::log(a) - std::log(double(j));
    log_terms.push_back(t);
  }
  log_terms.push_back(t + std::log(a) - std::log(double(c)) - std::log1p(-rho));
  return detail::log_sum_exp(log_terms);
}

double log_pi0_inverse_closed(int c, double lambda, double mu) {
  const double log_den = std::lgamma(double(c)) + double(c - 2) * std::log(mu) +
                         std::log(c * mu - lambda);
  return detail::log_binomial_rate_sum(c, lambda, mu) - log_den;
}

// Partial sums of A(x,y), rescaled on the fly so overload regimes
// (y >> x, where A is astronomically large) stay representable.
struct ScaledSum {
  double mantissa;
  double log_scale;
};

ScaledSum incomplete_gamma_a_series(double x, double y) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw validation_error("incomplete_gamma_a: x must be positive and finite");
  if (!(y >= 0.0) || !std::isfinite(y))
    throw validation_error("incomplete_gamma_a: y must be >= 0 and finite");
  double sum = 1.0;
  double term = 1.0;
  double log_scale = 0.0;
  for (std::size_t k = 1; k <= kSeriesTermCap; ++k) {
    term *= y / (x + double(k));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += std::log(1e280);
    }
    if (term < kSeriesRelTol * sum) return {sum, log_scale};
  }
  throw numeric_limit_error("incomplete_gamma_a: series exceeded 1e6 terms");
}

}  // namespace

double pi0_inverse_series(const QueueParams& params) {
  params.require_stable("pi0_inverse_series");
  const int c = params.servers();
  const double rho = params.utilization();
  const double a = params.arrival_rate() / params.service_rate();  // c rho
  if (c <= detail::kDirectFactorialLimit) {
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < c; ++j) {
      term *= a / double(j);
      sum += term;
    }
    const double tail = term * (a / double(c)) / (1.0 - rho);
    const double result = sum + tail;
    if (std::isfinite(result)) return result;
  }
  return std::exp(log_pi0_inverse_series(c, a, rho));
}

double pi0_inverse_closed(const QueueParams& params) {
  params.require_stable("pi0_inverse_closed");
  const int c = params.servers();
  const double lambda = params.arrival_rate();
  const double mu = params.service_rate();
  if (c <= detail::kDirectFactorialLimit) {
    const double num = detail::binomial_rate_sum(c, lambda, mu);
    double den = 1.0;
    for (int i = 2; i < c; ++i) den *= double(i);  // (c-1)!
    den *= std::pow(mu, c - 2) * (c * mu - lambda);
    const double result = num / den;
    if (std::isfinite(result) && result > 0.0) return result;
  }
  return std::exp(log_pi0_inverse_closed(c, lambda, mu));
}

double erlang_c_all_busy(const QueueParams& params) {
  params.require_stable("erlang_c_all_busy");
  const int c = params.servers();
  const double rho = params.utilization();
  const double a = params.arrival_rate() / params.service_rate();
  if (c <= detail::kDirectFactorialLimit) {
    double term = 1.0;
    for (int j = 1; j <= c; ++j) term *= a / double(j);  // a^c / c!
    const double result = term / (1.0 - rho) / pi0_inverse_closed(params);
    if (std::isfinite(result)) return result;
  }
  const double log_tail = double(c) * std::log(a) - std::lgamma(double(c) + 1.0) -
                          std::log1p(-rho);
  return std::exp(log_tail -
                  log_pi0_inverse_closed(c, params.arrival_rate(), params.service_rate()));
}

double erlang_b_blocking(const QueueParams& params) {
  const int c = params.servers();
  const double a = params.arrival_rate() / params.service_rate();
  if (c <= detail::kDirectFactorialLimit) {
    // 1/B_c = 1 + (c/a)(1/B_{c-1}), the standard stable recurrence
    double inv = 1.0;
    for (int k = 1; k <= c; ++k) inv = 1.0 + (double(k) / a) * inv;
    if (std::isfinite(inv)) return 1.0 / inv;
  }
  double log_inv = 0.0;
  for (int k = 1; k <= c; ++k) {
    const double t = std::log(double(k) / a) + log_inv;
    log_inv = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return std::exp(-log_inv);
}

double incomplete_gamma_a(double x, double y) {
  const ScaledSum s = incomplete_gamma_a_series(x, y);
  return s.log_scale == 0.0 ? s.mantissa : s.mantissa * std::exp(s.log_scale);
}

double log_incomplete_gamma_a(double x, double y) {
  const ScaledSum s = incomplete_gamma_a_series(x, y);
  return std::log(s.mantissa) + s.log_scale;
}

double erlang_a_all_busy(const QueueParams& params) {
  const auto& theta_opt = params.abandonment_rate();
  if (!theta_opt || *theta_opt == 0.0) return erlang_c_all_busy(params);
  const double theta = *theta_opt;
  if (std::isinf(theta)) return erlang_b_blocking(params);

  const double blocking = erlang_b_blocking(params);
  const double inv_blocking = 1.0 / blocking;
  if (!std::isfinite(inv_blocking))
    throw numeric_limit_error(
        "erlang_a_all_busy: 1/E is not representable (blocking probability underflows)");
  const double log_a = log_incomplete_gamma_a(params.pooled_service_rate() / theta,
                                              params.arrival_rate() / theta);
  if (log_a > 700.0) {
    // A dwarfs 1/E - 1; evaluate as 1 / (1 + (1/E - 1) / A)
    return 1.0 / (1.0 + (inv_blocking - 1.0) * std::exp(-log_a));
  }
  const double a_value = std::exp(log_a);
  return a_value / (inv_blocking + a_value - 1.0);
}

}  // namespace mmcmax
