#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entcert {

// Input failed a structural or numerical precondition (shape mismatch,
// non-Hermitian beyond tolerance, not a valid state, malformed file, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A party outside the operator's index range was requested.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// An operation restricted to qubits (or another fixed local dimension) was
// asked to act on a party of a different dimension.
class UnsupportedDimensionError : public std::invalid_argument {
public:
    explicit UnsupportedDimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// The requested map has no usable inverse at these parameters.
class NonInvertibleError : public std::runtime_error {
public:
    NonInvertibleError(const std::string& msg, double condition_estimate)
        : std::runtime_error(msg), condition_estimate(condition_estimate) {}

    double condition_estimate;  // NaN when no estimate applies
};

// Parameter point lies outside the validated region of a map family.
class RegionError : public std::runtime_error {
public:
    RegionError(const std::string& msg, std::vector<std::string> failed)
        : std::runtime_error(msg), failed_conditions(std::move(failed)) {}

    std::vector<std::string> failed_conditions;
};

// An enumeration would exceed the configured size cap.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace entcert
