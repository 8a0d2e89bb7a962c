// errors.hpp — exception hierarchy shared by every module of the lab.
#pragma once

#include <stdexcept>
#include <string>

namespace qsde {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shape, non-finite entries, violated preconditions on values.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A family expected to commute does not; the message names the worst pair.
class NotCommuting : public Error {
public:
    using Error::Error;
};

/// -1 lies in the spectrum of W, so I + W cannot be inverted.
class CayleySingular : public Error {
public:
    using Error::Error;
};

/// 2 + L3 (or 2 - l3) is singular in the adapted <-> symmetric conversion.
class ConversionSingular : public Error {
public:
    using Error::Error;
};

/// Discretization too coarse for the requested accuracy; increase n_steps.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the region covered by a grid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A boundary/jump precondition does not hold for the supplied data.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace qsde
