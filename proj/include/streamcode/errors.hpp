// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace streamcode {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parameters outside the mathematical domain of an operation, including
// infeasible construction parameters (rate/distance combinations that
// cannot exist).
class DomainError : public Error {
public:
    using Error::Error;
};

// Rejection sampling exhausted its attempt budget.
class ConstructionFailedError : public Error {
public:
    explicit ConstructionFailedError(const std::string& what, std::size_t attempts = 0)
        : Error(what), attempts(attempts) {}
    std::size_t attempts;
};

// An exhaustive scan would exceed the configured work cap. Raised instead
// of silently truncating the enumeration.
class ScaleExceededError : public Error {
public:
    using Error::Error;
};

// Text artifact could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

// decode_exact was handed a word that is not in any subset.
class NotACodewordError : public Error {
public:
    using Error::Error;
};

}  // namespace streamcode
