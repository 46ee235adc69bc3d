#pragma once

// Error taxonomy shared across the library. The CLI maps these to distinct
// exit codes: ConfigError -> 1, SicInfeasibleError -> 2, NumericalError -> 3.

#include <stdexcept>
#include <string>

namespace starnoma {

// Invalid configuration or request; message names the offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Power split cannot support the SIC threshold (a_far <= gamma_th * a_near),
// so the near-user closed forms are undefined.
struct SicInfeasibleError : std::domain_error {
    using std::domain_error::domain_error;
};

// A numeric routine produced or detected a non-finite / untrustworthy value.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative scheme exhausted its budget before reaching tolerance.
struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace starnoma
