#pragma once

#include <stdexcept>
#include <string>

namespace reflectwalk {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller mistakes: bad arguments, violated preconditions.
class usage_error : public error {
 public:
  using error::error;
};

// Invalid run configuration (CLI / config file / schedule parameters).
class config_error : public usage_error {
 public:
  using usage_error::usage_error;
};

// A mathematical assumption failed at runtime (ellipticity, obliqueness, ...).
class model_error : public error {
 public:
  using error::error;
};

// Convergence or stability failure of a numerical procedure.
class numeric_error : public error {
 public:
  using error::error;
};

// Projection requested outside the region where the nearest boundary point
// is guaranteed unique, or a projection iteration broke down.
class projection_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

}  // namespace reflectwalk
