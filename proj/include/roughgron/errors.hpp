#pragma once

#include <stdexcept>
#include <string>

namespace roughgron {

/// A numeric parameter lies outside the range an operation accepts.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A query falls outside the domain of a sampled object (off-grid time,
/// unordered triple, negative initial datum for a reflection).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Two pieces of data that should agree do not.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

inline void require_rough_p(double p) {
    if (!(p >= 2.0 && p < 3.0)) {
        throw ParameterError("rough path exponent p must lie in [2,3), got " + std::to_string(p));
    }
}

} // namespace roughgron
