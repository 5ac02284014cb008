#ifndef PCFL_ERRORS_HPP
#define PCFL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcfl {

// Base class for all validation failures raised by this library. The CLI
// maps these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension / value-space mismatch between two objects.
struct ShapeError : Error {
    using Error::Error;
};

// A CPT of the wrong kind (observational vs interventional) was supplied.
struct KindError : Error {
    using Error::Error;
};

// Malformed or inconsistent user input (files, sample sets).
struct InputError : Error {
    using Error::Error;
};

// Invalid configuration value (cluster counts, bandwidths, ...).
struct ConfigError : Error {
    using Error::Error;
};

// A coarsening class ended up with zero probability mass.
struct DegenerateClassError : Error {
    using Error::Error;
};

// A required (cause, effect) pair was never observed.
struct CoverageError : Error {
    using Error::Error;
};

// A linear system could not be solved.
struct SolverError : Error {
    using Error::Error;
};

}  // namespace pcfl

#endif
