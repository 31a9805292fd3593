#pragma once

#include <stdexcept>
#include <string>

namespace znqed {

// Invalid run configuration or input file. CLI exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown during a run (non-finite amplitudes, failed
// convergence). CLI exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem / serialization failure. CLI exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace znqed
