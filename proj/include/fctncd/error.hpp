#pragma once

#include <stdexcept>
#include <string>

namespace fctncd {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (grid extents, config files, scheme names).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problem data outside its admissible range (e.g. negative diffusion).
class DataError : public Error {
public:
    using Error::Error;
};

/// Caller broke an API contract (mismatched shapes, empty windows).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Time step violates the monotonicity conditions of the low-order scheme.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Linear or LP solver failure.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace fctncd
