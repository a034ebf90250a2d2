#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geoloc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data or a violated operation precondition.
struct ValidationError : Error {
    using Error::Error;
};

/// An iterative kernel failed to reach its tolerance within max_iterations.
/// Carries the last iterate(s) and the final residual so callers can inspect
/// how far the computation got.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, std::vector<std::vector<double>> iterates,
                     int iterations_run, double final_residual)
        : Error(what),
          last_iterates(std::move(iterates)),
          iterations(iterations_run),
          residual(final_residual) {}

    std::vector<std::vector<double>> last_iterates;
    int iterations;
    double residual;
};

} // namespace geoloc
