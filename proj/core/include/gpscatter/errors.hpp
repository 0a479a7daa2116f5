#pragma once

#include <stdexcept>
#include <string>

namespace gpscatter {

/// Bad configuration or malformed input file. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure (blow-up, non-convergence, width collapse). Maps to CLI
/// exit code 3. Carries the step index and simulation time at which the
/// failure was detected.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long step, double time)
        : std::runtime_error(what), step_(step), time_(time) {}

    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

/// Filesystem or serialization failure. Maps to CLI exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gpscatter
