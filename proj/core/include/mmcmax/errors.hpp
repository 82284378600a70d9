#pragma once

#include <stdexcept>

namespace mmcmax {

/// Bad or inconsistent inputs. The CLI maps this family to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// rho >= 1 where a stable queue is required.
class unstable_queue_error : public validation_error {
 public:
  using validation_error::validation_error;
};

/// A computation left the range affordable in double precision
/// (series cap hit, 1/E overflow, ...). CLI exit code 3.
class numeric_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact transient oracle was asked for more than its budget allows.
class oracle_scale_error : public numeric_limit_error {
 public:
  using numeric_limit_error::numeric_limit_error;
};

}  // namespace mmcmax
