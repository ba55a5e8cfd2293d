#pragma once

#include <stdexcept>
#include <string>

namespace hfdae {

/// Argument vectors whose lengths disagree with the grid or with each other.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A sampled function returned a non-finite value.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series defined on different grids were combined.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A right-hand side or constraint evaluated to a non-finite value at an
/// accepted iterate.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, std::size_t node, std::size_t equation)
        : std::runtime_error(what), node_(node), equation_(equation) {}

    std::size_t node() const noexcept { return node_; }
    std::size_t equation() const noexcept { return equation_; }

private:
    std::size_t node_;
    std::size_t equation_;
};

/// Unknown problem identifier.
class CatalogError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A reference computation could not certify its own result.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hfdae
