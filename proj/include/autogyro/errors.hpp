#pragma once

#include <stdexcept>
#include <string>

namespace autogyro {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver failure or a non-finite intermediate.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SimulationFault : public std::runtime_error {
public:
    SimulationFault(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace autogyro
