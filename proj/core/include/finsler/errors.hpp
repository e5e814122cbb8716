#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Point outside the smoothness domain of a metric (zero section, branch
/// point of sqrt/pow, or outside the chart validity region).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Derivative request beyond the supported jet order.
class OrderError : public Error {
public:
    using Error::Error;
};

/// Invalid metric or map parameters (e.g. bergman with c >= 0).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Vector/matrix size mismatch.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Fundamental tensor not invertible at the requested tolerance.
class SingularMetricError : public Error {
public:
    SingularMetricError(const std::string& what, double min_eigenvalue, double condition)
        : Error(what), min_eigenvalue(min_eigenvalue), condition(condition) {}

    double min_eigenvalue = 0.0;
    double condition = 0.0;
};

/// Step-doubling error estimate of the fixed-step integrator exceeded its bound.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// A theorem-level check was requested at a point where the theorem's
/// hypothesis fails (e.g. chart transformation laws without nabla J = 0).
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// DSL parse failure with source position and expectation.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, int line, int column)
        : Error(what), line(line), column(column) {}

    int line = 0;
    int column = 0;
};

/// DSL index out of the 1..n range.
class IndexError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// DSL builtin called with the wrong number of arguments.
class ArityError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

} // namespace finsler
