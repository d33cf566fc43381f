#pragma once

#include <stdexcept>
#include <string>

namespace levyest {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Jump law does not satisfy intensity * E[Y^2] = 1.
struct NormalizationError : Error {
    using Error::Error;
};

/// Noise variance rho1^2 + rho2^2 exceeds the family bound.
struct FamilyBoundError : Error {
    using Error::Error;
};

/// An operation needs a jump law (or positive variance) that is absent.
struct DegenerateError : Error {
    using Error::Error;
};

/// Two sampled objects do not live on the same grid.
struct GridMismatch : Error {
    using Error::Error;
};

/// Input outside the operation's stated domain (e.g. eps > 1/sqrt(3)).
struct DomainError : Error {
    using Error::Error;
};

/// Selection threshold delta outside (0, 1/6).
struct DeltaRangeError : Error {
    using Error::Error;
};

/// Index argument out of bounds.
struct RangeError : Error {
    using Error::Error;
};

/// Invalid configuration (bad key, empty weight family, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Relative risk requested for the identically-zero signal.
struct ZeroSignal : Error {
    using Error::Error;
};

/// Filesystem failure.
struct IOError : Error {
    using Error::Error;
};

}  // namespace levyest
