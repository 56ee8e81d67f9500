#pragma once

#include <stdexcept>
#include <string>

namespace navsim {

// Raised on malformed scenario configs, bad graph definitions, invalid parameters.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the closed loop cannot continue: Psi singular (|v_x| below the
// guard), the implicit control matrix numerically singular, or the integrator
// producing non-finite state. The CLI maps this to exit code 3.
class RuntimeFailure : public std::runtime_error {
public:
    RuntimeFailure(const std::string& what, double time, int vehicle = -1)
        : std::runtime_error(what), time_(time), vehicle_(vehicle) {}

    double time() const { return time_; }
    int vehicle() const { return vehicle_; }

private:
    double time_;
    int vehicle_;
};

}  // namespace navsim
