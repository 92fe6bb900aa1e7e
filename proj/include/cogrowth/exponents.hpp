#pragma once

#include <cstdint>
#include <string>

#include "cogrowth/params.hpp"
#include "cogrowth/subgroups.hpp"

namespace cogrowth {

enum class ExponentMethod { root_solve, transfer_matrix, brute_force };

const char* to_string(ExponentMethod m);

struct ExponentResult {
    double value = 0.0;
    ExponentMethod method = ExponentMethod::root_solve;
    double residual = 0.0;    // defining equation evaluated at value
    double bracket_lo = 0.0;  // final bisection bracket
    double bracket_hi = 0.0;
    std::string flags;        // "", "empty-core", "polynomial-growth"
};

// Growth exponent of F_n on the weighted tree: the unique s with
// l(H(r, s)) = 0, located by bisection (l along H(r, .) is strictly
// decreasing from a positive limit to -1).
ExponentResult delta_free(const EdgeLengths& r);

// Perron root of the weighted non-backtracking edge-transition matrix
// B(s), entries r_label^s. Exposed for tests and used by delta_subgroup.
double transfer_spectral_radius(const CoreGraph& core, const EdgeLengths& r, double s);

// Growth exponent of the subgroup: the unique s >= 0 with spectral radius
// of B(s) equal to 1, or 0 when the radius stays below 1 for all s > 0
// (single cycles, trivial subgroups).
ExponentResult delta_subgroup(const CoreGraph& core, const EdgeLengths& r);

// Exact number of subgroup elements with d_r(id, g) <= radius, counted as
// non-backtracking base loops of the core graph aggregated by letter
// multiset. Oracle for delta_subgroup; supports rank <= 8.
std::uint64_t count_loops(const CoreGraph& core, const EdgeLengths& r, double radius,
                          std::uint64_t count_cap = 1'000'000'000'000'000'000ULL);

// log(count)/radius with the exact count above.
ExponentResult delta_bruteforce(const CoreGraph& core, const EdgeLengths& r, double radius,
                                std::uint64_t count_cap = 1'000'000'000'000'000'000ULL);

} // namespace cogrowth
