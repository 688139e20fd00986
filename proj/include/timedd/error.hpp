#pragma once

#include <stdexcept>
#include <string>

namespace timedd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spatial grid with N = 0 or L <= 0.
class InvalidGrid : public Error {
public:
    using Error::Error;
};

/// Parameter set, time grid or run configuration violating a precondition.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Discrete boundary value problem whose matrix is numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Closed-form evaluation that produced a non-finite value.
class EvaluationOverflow : public Error {
public:
    using Error::Error;
};

/// Subdomain solve failure, annotated with where it happened.
class SolverFailure : public Error {
public:
    using Error::Error;
};

}  // namespace timedd
