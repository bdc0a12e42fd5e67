#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace memspike {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejected input or violated precondition.
struct InvalidInput : Error {
    using Error::Error;
};

/// Configuration problem (unknown preset, bad key, missing section).
struct ConfigError : Error {
    using Error::Error;
};

/// Recording file could not be parsed. `line` is 1-based; 0 when unknown.
struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_no) : Error(msg), line(line_no) {}
};

/// Relaxation monitoring hit the batch cap without reaching equilibrium.
/// Carries the partial read trace (seconds since monitor start, ohms) and,
/// when raised from a sweep, the offending write voltage.
struct NonSettlingError : Error {
    std::vector<std::pair<double, double>> partial_trace;
    double v_w;
    NonSettlingError(const std::string& msg,
                     std::vector<std::pair<double, double>> trace,
                     double v_w_volts = 0.0)
        : Error(msg), partial_trace(std::move(trace)), v_w(v_w_volts) {}
};

/// Too few usable noise measurements to estimate a noise band.
struct InsufficientNoiseError : Error {
    using Error::Error;
};

}  // namespace memspike
