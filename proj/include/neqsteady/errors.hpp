// errors.hpp — Exception taxonomy shared by all neqsteady modules.

#pragma once

#include <stdexcept>
#include <string>

namespace neqsteady {

// Base class so callers can catch any library failure in one handler.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- linear algebra kernel ---
struct NotHermitianError : Error {
    using Error::Error;
};
struct NoConvergenceError : Error {
    using Error::Error;
};
struct SingularError : Error {
    using Error::Error;
};

// --- model construction ---
struct DuplicateCouplingError : Error {
    using Error::Error;
};
struct NonPositiveSpectrumError : Error {
    using Error::Error;
};
struct InvalidSpecError : Error {
    using Error::Error;
};

// --- scalar domain violations (Planck factors, effective temperature) ---
struct DomainError : Error {
    using Error::Error;
};

// --- phase-space solver ---
struct UndampedModeError : Error {
    using Error::Error;
};
struct StepTooLargeError : Error {
    using Error::Error;
};
struct NegativeOccupationError : Error {
    using Error::Error;
};

// --- adiabatic elimination ---
struct ResonantBusError : Error {
    using Error::Error;
};
struct NotDegenerateError : Error {
    using Error::Error;
};

// --- Fock-space oracle ---
struct NotConvergedError : Error {
    using Error::Error;
};

// --- configuration / CLI ---
struct ConfigError : Error {
    using Error::Error;
};

} // namespace neqsteady
