#pragma once

#include <stdexcept>
#include <string>

namespace bivos {

/// Base class for every error raised by the library. `code()` is a short
/// machine-readable tag used by the CLI (`error: <code>: <message>`).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Problem size above a configured computational limit.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

/// The copula's partial derivative in v does not exist at the requested point.
class NonDifferentiableError : public Error {
public:
    explicit NonDifferentiableError(const std::string& what)
        : Error("non_differentiable", what) {}
};

class DegenerateVarianceError : public Error {
public:
    explicit DegenerateVarianceError(const std::string& what)
        : Error("degenerate_variance", what) {}
};

/// A rank rule produced k(n) or j(n) outside {1, ..., n}.
class RankRuleError : public Error {
public:
    explicit RankRuleError(const std::string& what) : Error("rank_rule", what) {}
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double error_estimate)
        : Error("quadrature", what), error_estimate_(error_estimate) {}

    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// Malformed copula/case specification string or experiment config.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse", what) {}
};

} // namespace bivos
