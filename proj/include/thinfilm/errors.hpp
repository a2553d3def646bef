#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

/// Base class for every failure raised by the numerical layers.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The constitutive law is not invertible (r >= 8/9): the total shear
/// stress is no longer a strictly increasing function of the shear rate.
struct MonotonicityViolated : SolverError {
    using SolverError::SolverError;
};

/// An iteration budget was exhausted before reaching the requested residual.
struct NoConvergence : SolverError {
    using SolverError::SolverError;
};

/// A gap height h <= 0 was supplied where a positive film is required.
struct InvalidGap : SolverError {
    using SolverError::SolverError;
};

/// r >= 2/9: the mobility of the pressure-gradient equation is no longer
/// guaranteed to keep one sign, so the Reynolds-type solvers refuse to run.
struct RheologyOutOfRange : SolverError {
    using SolverError::SolverError;
};

/// No pressure gradient reproduces the requested flux within the bracket
/// expansion budget.
struct FluxUnreachable : SolverError {
    using SolverError::SolverError;
};

/// The adaptive step controller stalled (step size underflow or step budget).
struct StepFailure : SolverError {
    using SolverError::SolverError;
};

/// A z coordinate outside [0, h(x)] was passed to a field evaluator.
struct OutOfGap : SolverError {
    using SolverError::SolverError;
};

/// Rescale factor outside (0, 1], or applied twice to the same fields.
struct InvalidEpsilon : SolverError {
    using SolverError::SolverError;
};

/// A mathematically guaranteed property failed numerically. Indicates a
/// broken build or inputs far outside the supported regime, never a state
/// the caller is expected to handle.
struct InvariantViolation : SolverError {
    using SolverError::SolverError;
};

/// Base for configuration problems; carries the full list of issues so a
/// user can fix a file in one pass.
struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;

    explicit ConfigError(const std::vector<std::string>& problems)
        : std::runtime_error(join(problems)), issues(problems) {}

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string all;
        for (const auto& p : problems) {
            if (!all.empty()) all += "; ";
            all += p;
        }
        return all;
    }
};

/// Malformed configuration text (unreadable file, bad syntax, unknown keys,
/// unparseable numbers, missing required keys).
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

/// Well-formed configuration whose values violate a documented constraint.
struct ConstraintError : ConfigError {
    using ConfigError::ConfigError;
};

} // namespace thinfilm
