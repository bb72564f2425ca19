#pragma once

#include <stdexcept>
#include <string>

namespace hjselect {

// Base for everything thrown by the library. The CLI maps subclasses onto
// exit codes, so new error types should derive from one of the categories
// below rather than from Error directly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed config, out-of-range parameters, impossible
// requests. Exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A numerical routine could not complete: lost bracket, divergence,
// tolerance failure. Exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Filesystem trouble. Exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

// ---- numerical error conditions -------------------------------------------

// Maximization bracket contains a non-concave stretch, so golden-section
// answers would be unreliable.
class NonConcaveObjective : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A maximizer landed on the edge of its search interval; the true optimum
// may lie outside.
class SearchIntervalTooSmall : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Finite-volume boundary cells drifted: the computational domain was not
// padded widely enough for the requested horizon.
class UnpaddedDomain : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A wave reached the anchor cell used to pin the potential's additive
// constant, so the anchor state is no longer trustworthy.
class AnchorInvaded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Characteristic crossing scan found no focusing anywhere in its window.
class NoCrossing : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Jump too small for a meaningful Rankine-Hugoniot quotient.
class DegenerateJump : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Could not recover one-sided states at a discontinuity.
class StateReconstructionFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Point evaluation requested exactly on a tracked discontinuity, where the
// solution has no single value.
class OnShock : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Step-halving disagreement exceeded tolerance in an ODE integration.
class StepTooLarge : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Certificate scan completed without finding any admissibility violation.
// Exit code 3 (distinct from NumericalError's 2).
class NoViolationFound : public Error {
public:
    using Error::Error;
};

}  // namespace hjselect
