#pragma once

#include <stdexcept>
#include <string>

namespace wclt {

// Spectral parameters too close with opposite imaginary parts; caller must widen eta.
struct NearSingularStability : std::runtime_error {
    explicit NearSingularStability(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration request beyond the supported combinatorial size caps.
struct SizeLimit : std::runtime_error {
    explicit SizeLimit(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive refinement exhausted its budget before reaching the requested tolerance.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

struct EigendecompositionFailure : std::runtime_error {
    explicit EigendecompositionFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NotTraceless : std::runtime_error {
    explicit NotTraceless(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wclt
