#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stbclab {

using cplx = std::complex<double>;

// Bad request / bad parameters. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation could not be carried out. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficientError : NumericalError {
    using NumericalError::NumericalError;
};

// Enumeration request larger than the configured cap.
struct CapExceededError : ConfigError {
    using ConfigError::ConfigError;
};

}  // namespace stbclab
