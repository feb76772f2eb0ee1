#pragma once

#include <stdexcept>
#include <string>

namespace jetnorm {

/// Malformed input: wrong dimensions, incompatible orders, bad documents.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Valid structure but outside an operation's domain (degenerate metric,
/// exhausted jet order, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested hbar order exceeds what the local star-product backend can
/// compute for the given (transported) Poisson jet.
class BackendIncompleteError : public DomainError {
public:
    explicit BackendIncompleteError(const std::string& what) : DomainError(what) {}
};

/// A condition the theory guarantees failed at runtime (e.g. a normalization
/// linear system without a unique solution). Always a bug, never user error.
class InternalInvariantError : public std::logic_error {
public:
    explicit InternalInvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace jetnorm
