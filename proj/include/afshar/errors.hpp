#pragma once

#include <stdexcept>
#include <string>

namespace afshar {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument values or violated type invariants.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The sampling grid is too coarse to represent a requested structure
/// (pinhole, wire period, lens phase at the aperture edge).
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Wraparound guard: significant energy reached the edge of the periodic
/// computation window during propagation.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// A sampled profile does not span enough fringe periods for the estimator.
class InsufficientSpanError : public Error {
public:
    using Error::Error;
};

/// An analysis was asked for without all prerequisite scenario results.
class IncompleteInputError : public Error {
public:
    using Error::Error;
};

/// File input/output failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace afshar
