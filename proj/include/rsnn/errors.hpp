#pragma once

#include <stdexcept>
#include <string>

namespace rsnn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameter value or malformed domain object.
struct ParameterError : Error {
    using Error::Error;
};

// Non-finite state, non-convergence, runaway dynamics.
struct NumericalError : Error {
    using Error::Error;
};

// Overlapping events, malformed schedules.
struct ScheduleError : Error {
    using Error::Error;
};

// Measurement window placed where the protocol forbids it.
struct ProtocolError : Error {
    using Error::Error;
};

// Bad experiment config file. `where` is a dotted path into the config.
struct ConfigError : Error {
    std::string where;
    ConfigError(const std::string& where_, const std::string& what_)
        : Error(where_.empty() ? what_ : where_ + ": " + what_), where(where_) {}
};

} // namespace rsnn
