#pragma once
#include <stdexcept>
#include <string>

namespace hpn {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// D_x^{-1} applied to an integrand whose mean is not (numerically) zero.
struct NonlocalityError : std::runtime_error {
    NonlocalityError(std::string block, double mean)
        : std::runtime_error("nonlocal term leaves the periodic class in " + block +
                             " (mean " + std::to_string(mean) + ")"),
          block(std::move(block)), mean(mean) {}
    std::string block;
    double mean;
};

struct BlowUpError : std::runtime_error {
    explicit BlowUpError(double t)
        : std::runtime_error("non-finite state at t = " + std::to_string(t)), time(t) {}
    double time;
};

struct IntegrationAccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hpn
