#pragma once

#include <stdexcept>
#include <string>

namespace synlens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural problem with user configuration (missing column, bad spec file).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data cannot form a valid corpus (too few examples, inconsistent embeddings).
class DataError : public Error {
public:
    using Error::Error;
};

/// A metric was requested for examples that lack the needed annotation.
class UnavailableViewError : public DataError {
public:
    using DataError::DataError;
};

/// A caller broke a documented precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace synlens
