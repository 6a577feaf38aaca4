#pragma once

#include <stdexcept>
#include <string>

namespace flagcalc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (size mismatch, bad index, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Operands live in incompatible coefficient rings.
struct RingMismatchError : Error {
    using Error::Error;
};

/// exact_div was asked to divide by a non-divisor. Never downgraded to a
/// truncation: callers rely on this as a correctness tripwire.
struct NonDivisibleError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace flagcalc
