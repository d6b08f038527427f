#pragma once

#include <stdexcept>
#include <string>

namespace tetherplan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: malformed files, violated preconditions, invalid scenario points.
// The CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};
struct InvalidEndpointError : ValidationError {
    using ValidationError::ValidationError;
};
struct InvalidReelError : ValidationError {
    using ValidationError::ValidationError;
};
struct NoFreeSpaceError : ValidationError {
    using ValidationError::ValidationError;
};
struct UndefinedFractionError : ValidationError {
    using ValidationError::ValidationError;
};

// Well-formed queries with no solution. The CLI maps these to exit code 3.
struct PlanningError : Error {
    using Error::Error;
};
struct NoPathError : PlanningError {
    using PlanningError::PlanningError;
};
struct TetherBlockedEndpointError : PlanningError {
    using PlanningError::PlanningError;
};
struct SamplingExhaustedError : PlanningError {
    using PlanningError::PlanningError;
};
struct ContactUnresolvableError : PlanningError {
    using PlanningError::PlanningError;
};

} // namespace tetherplan
