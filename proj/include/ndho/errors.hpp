#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ndho {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational arithmetic left the representable range.
struct OverflowError : Error {
    using Error::Error;
};

// Syntax error while reading an expression; offset is the 0-based
// position in the input text where scanning stopped.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
    std::size_t offset;
};

// Identifier that is neither reserved nor declared by the caller.
struct UnknownSymbolError : ParseError {
    UnknownSymbolError(const std::string& name, std::size_t off)
        : ParseError("unknown symbol '" + name + "'", off), symbol(name) {}
    std::string symbol;
};

// Numeric evaluation failures.
struct EvalError : Error {
    using Error::Error;
};
struct UnboundSymbolError : EvalError {
    explicit UnboundSymbolError(const std::string& name)
        : EvalError("unbound symbol '" + name + "' in numeric evaluation"), symbol(name) {}
    std::string symbol;
};
struct DomainError : EvalError {
    using EvalError::EvalError;
};

// Operation fell outside the closed expression class the kernel supports.
struct UnsupportedExpressionError : Error {
    using Error::Error;
};

struct DegenerateLagrangianError : Error {
    using Error::Error;
};

// Residual of the symmetry condition contains monomials the structured
// ansatz cannot produce; the Lagrangian is outside the supported class.
struct AnsatzMismatchError : Error {
    using Error::Error;
};

// Sign of c^2 - 4km could not be decided exactly.
struct RegimeResolutionError : Error {
    using Error::Error;
};

struct NotASymmetryError : Error {
    using Error::Error;
};

struct NonAffineIntegralError : Error {
    using Error::Error;
};

struct SingularSystemError : Error {
    using Error::Error;
};

// A Lie bracket does not lie in the span of the basis.
struct NotClosedError : Error {
    using Error::Error;
};

struct DependentBasisError : Error {
    using Error::Error;
};

struct StepOverflowError : Error {
    using Error::Error;
};

// A derived quantity failed its own invariant; indicates a defect in the
// library rather than bad input.
struct InternalCheckError : Error {
    using Error::Error;
};

inline void internal_check(bool ok, const std::string& what) {
    if (!ok) throw InternalCheckError("internal verification failure: " + what);
}

}  // namespace ndho
