#pragma once

#include <stdexcept>
#include <string>

namespace spheresync {

// Violated precondition on an argument (dimension mismatch, out-of-range value).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two coupled agents are antipodal, where the coupling direction is undefined.
class SingularConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity the caller needs is undefined for this configuration (zero mean, south pole).
class DegenerateConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A generator cannot produce an object satisfying the requested constraints.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spheresync
