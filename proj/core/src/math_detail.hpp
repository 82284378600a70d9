#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace mmcmax::detail {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Factorial-bearing sums are evaluated directly in doubles up to c = 170
// (171! overflows) and in log space above.
inline constexpr int kDirectFactorialLimit = 170;

inline double log_sum_exp(std::span<const double> logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : logs)
    if (v > top) top = v;
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - top);
  return top + std::log(acc);
}

// S(c, lambda, mu) = sum_{j=1}^{c} j! C(c-1,j-1) lambda^{c-j} mu^{j-1},
// the finite binomial sum shared by the closed 1/pi_0 form and the clump
// rate. Terms follow t_1 = lambda^{c-1},
// t_{j+1} = t_j (j+1)(c-j) mu / (j lambda). May overflow to inf; callers
// fall back to the log form below.
inline double binomial_rate_sum(int c, double lambda, double mu) {
  double term = std::pow(lambda, c - 1);
  double sum = term;
  for (int j = 1; j < c; ++j) {
    term *= double(j + 1) * double(c - j) * mu / (double(j) * lambda);
    sum += term;
  }
  return sum;
}

inline double log_binomial_rate_sum(int c, double lambda, double mu) {
  const double log_lambda = std::log(lambda);
  const double log_mu = std::log(mu);
  std::vector<double> log_terms(c);
  double t = double(c - 1) * log_lambda;
  log_terms[0] = t;
  for (int j = 1; j < c; ++j) {
    t += std::log(double(j + 1)) + std::log(double(c - j)) + log_mu -
         std::log(double(j)) - log_lambda;
    log_terms[j] = t;
  }
  return log_sum_exp(log_terms);
}

}  // namespace mmcmax::detail
