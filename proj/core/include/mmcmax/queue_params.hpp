#pragma once

#include <optional>

#include "mmcmax/errors.hpp"

namespace mmcmax {

/// Parameters of an M/M/c service system: c parallel servers, Poisson
/// arrivals at `arrival_rate`, exponential service at `service_rate` per
/// busy server, and optionally an exponential patience (abandonment)
/// rate for M/M/c+M models. Utilization rho = lambda/(c mu) is always
/// derived, never stored.
class QueueParams {
 public:
  QueueParams(int servers, double arrival_rate, double service_rate,
              std::optional<double> abandonment_rate = std::nullopt);

  int servers() const { return servers_; }
  double arrival_rate() const { return arrival_rate_; }
  double service_rate() const { return service_rate_; }
  const std::optional<double>& abandonment_rate() const { return abandonment_rate_; }

  /// rho = lambda / (c mu)
  double utilization() const { return arrival_rate_ / (servers_ * service_rate_); }

  /// c mu, the departure rate with every server busy.
  double pooled_service_rate() const { return servers_ * service_rate_; }

  bool stable() const { return utilization() < 1.0; }

  /// Throws unstable_queue_error unless rho < 1. `operation` names the
  /// caller in the message.
  void require_stable(const char* operation) const;

 private:
  int servers_;
  double arrival_rate_;
  double service_rate_;
  std::optional<double> abandonment_rate_;
};

}  // namespace mmcmax
