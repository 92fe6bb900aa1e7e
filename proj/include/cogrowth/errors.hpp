#pragma once

#include <stdexcept>
#include <string>

namespace cogrowth {

// Thrown by solve_weights when the determinant D(u) vanishes relative to
// the largest partial product, e.g. at u = (1,...,1).
class DegenerateDeterminant : public std::runtime_error {
public:
    explicit DegenerateDeterminant(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown by fixed-point solvers when the iteration diverges or stalls;
// for the first-passage system this signals t below the spectral radius.
class NoConvergence : public std::runtime_error {
public:
    explicit NoConvergence(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when an enumeration or graph construction would exceed its
// configured size budget.
class ResourceCapExceeded : public std::runtime_error {
public:
    explicit ResourceCapExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when two quantities that must agree by theory disagree beyond
// tolerance; indicates a numerical fault, not bad input.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace cogrowth
