#pragma once

#include <stdexcept>
#include <string>

namespace esdr {

/// Raised for invalid inputs and unrecoverable numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace esdr
