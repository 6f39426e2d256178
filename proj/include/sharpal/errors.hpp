#pragma once

#include <stdexcept>
#include <string>

namespace sharpal {

/// Requested item (problem id, driver name, ...) does not exist.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The operation is valid but outside what this build supports, e.g. grid
/// minimization in more than three dimensions.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sharpal
