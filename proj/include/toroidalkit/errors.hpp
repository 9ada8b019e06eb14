#pragma once

#include <stdexcept>
#include <string>

namespace toroidalkit {

// Inputs violate a documented precondition (non-unimodular matrix, non-dominant weight, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Two operands were built over different algebras or modules.
struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The request is well formed but outside what the engine handles exactly.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace toroidalkit
