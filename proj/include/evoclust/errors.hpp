#pragma once

#include <stdexcept>
#include <string>

namespace evoclust {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File / parse / validation problems in dataset ingestion.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// A hard labeling cannot support maximum-likelihood estimates:
// a component is empty, too small, or its covariance is singular.
class InfeasibleLabeling : public Error {
public:
    InfeasibleLabeling(const std::string& msg, int component)
        : Error(msg), component(component) {}
    int component;
};

// Symmetric positive-definite factorization of a covariance failed.
class FactorizationError : public Error {
public:
    FactorizationError(const std::string& msg, int component)
        : Error(msg), component(component) {}
    int component;
};

// EM hit a degenerate component (vanishing weight or singular covariance).
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& msg, int iteration, double last_log_likelihood)
        : Error(msg), iteration(iteration), last_log_likelihood(last_log_likelihood) {}
    int iteration;
    double last_log_likelihood;
};

// Crossover cannot find two observations with different assignments.
class NoDistinctPair : public Error {
public:
    explicit NoDistinctPair(const std::string& msg) : Error(msg) {}
};

}  // namespace evoclust
