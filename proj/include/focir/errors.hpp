#pragma once

#include <stdexcept>
#include <string>

namespace focir {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent matrix/vector shapes or sequence lengths.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for every failure raised while inverting a coefficient map.
class IdentificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The coefficients sit on the boundary of the parameter domain (a zero
/// denominator in a closed-form inverse).
class SingularStructureError : public IdentificationError {
public:
    using IdentificationError::IdentificationError;
};

/// No parameter vector of the claimed structure reproduces the coefficients.
class InconsistentCoefficientsError : public IdentificationError {
public:
    using IdentificationError::IdentificationError;
};

/// A probe value lies outside the attainable range of the target function.
class NoSolutionError : public InconsistentCoefficientsError {
public:
    using InconsistentCoefficientsError::InconsistentCoefficientsError;
};

/// The coefficient vector does not carry the structure it is tagged with,
/// e.g. a single-CPE a-sequence that breaks the ratio recursion.
class StructureMismatchError : public InconsistentCoefficientsError {
public:
    using InconsistentCoefficientsError::InconsistentCoefficientsError;
};

/// The structure tag has no inversion procedure.
class UnsupportedStructureError : public IdentificationError {
public:
    using IdentificationError::IdentificationError;
};

}  // namespace focir
