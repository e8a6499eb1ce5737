#ifndef OSM_ERRORS_HPP
#define OSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace osm {

// Invalid experiment description or geometry that cannot start a computation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure inside the forward solver; carries the last residual.
struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, double residual_, int iterations_)
        : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

// Malformed or inconsistent dataset / image files.
struct DataFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace osm

#endif
