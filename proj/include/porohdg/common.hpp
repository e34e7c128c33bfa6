#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace porohdg {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Mesh violates a topological invariant (non-conforming edge, bad tags, ...).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter value or inconsistent configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf detected, singular matrix, or a failed linear solve.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace porohdg
