#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Malformed or unresolvable configuration. Carries the 1-based source line
/// when the problem can be traced to one (0 otherwise).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// An iterative numerical method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Requested Bell angle does not exist because the phase law is flat.
class UniformStateError : public std::runtime_error {
public:
    UniformStateError() : std::runtime_error("state is uniform, no such angle") {}
};

}  // namespace spdc
