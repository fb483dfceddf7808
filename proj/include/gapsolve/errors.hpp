#pragma once

#include <stdexcept>
#include <string>

namespace gapsolve {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix expected to be symmetric positive definite has a pivot at or
/// below the tolerance. For shifted problems this signals E <= lambda0.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

/// Shift parameter E does not lie above the lower block's supremum lambda0.
struct ShiftBelowLambda0 : Error {
    using Error::Error;
};

struct KTooLarge : Error {
    using Error::Error;
};

/// No level crosses zero above lambda0: the variational gap assumption
/// fails at the requested index.
struct NoGap : Error {
    using Error::Error;
};

/// Shift coincides with an eigenvalue of the assembled pencil.
struct SingularShift : Error {
    using Error::Error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

/// Free-channel eigenvalue found inside the spectral gap; the positive/
/// negative partition of the free eigenbasis is ill-defined.
struct DegenerateSplit : Error {
    using Error::Error;
};

struct InvalidQuantumNumbers : Error {
    using Error::Error;
};

}  // namespace gapsolve
