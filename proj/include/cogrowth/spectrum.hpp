#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogrowth/params.hpp"
#include "cogrowth/subgroups.hpp"

namespace cogrowth {

enum class SpectralMethod {
    closed_form_min,
    gamma_max,
    first_passage,
    truncated_power_iteration,
    monte_carlo,
};

const char* to_string(SpectralMethod m);

struct SpectralEstimate {
    double value = 0.0;
    SpectralMethod method = SpectralMethod::closed_form_min;
    std::optional<double> error_bound;

    // method-specific metadata
    std::optional<double> cross_check;         // second in-artifact route
    std::vector<std::size_t> depths;           // truncation depths used
    std::vector<double> depth_values;          // estimate per depth
    std::optional<double> extrapolated;        // Aitken extrapolation
    std::optional<double> raw_value;           // MC: uncorrected 2m-th root
    std::optional<double> ci_lo, ci_hi;        // MC: 95% interval on value
    std::uint64_t samples = 0;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::string rng;
    std::string notes;
};

// tau at which lambda along the constraint curve is maximal: the unique
// root of sum_i tau/sqrt(tau^2 + 4 p_i^2) = n - 1.
double tau_star(const Weights& p);

// Spectral radius of A_p on the tree through the closed-form minimum
//   rho = min_{t>0} (1/t)( sum_i sqrt(1 + 4 p_i^2 t^2) - (n-1) ).
double rho_eq1(const Weights& p);

// Same quantity as 1 - max_tau lambda(gamma_p(tau)).
double rho_gamma(const Weights& p);

// rho via rho_eq1, cross-checked against rho_gamma (reported in meta).
SpectralEstimate rho_free(const Weights& p);

// The edge-length parameter whose critical half-exponent realizes rho(p):
// r from h_inverse(gamma_p(tau_star)); consistency |2 s0 - delta(r)| < 1e-9
// is enforced and a ConsistencyError thrown on violation.
EdgeLengths r_for_p(const Weights& p);

struct FirstPassageVector {
    std::vector<double> values;
    double t = 0.0;
    double residual = 0.0;       // of the defining quadratic system
    std::uint64_t iterations = 0;
    bool at_threshold = false;   // t numerically equal to the spectral radius
};

// Minimal positive solution of u_i = p_i/t + (p_i/t) u_i^2
//                                  + (2/t) sum_{k != i} p_k u_k u_i.
// Dividing the i-th equation by u_i shows c_i(u, p) = 1 - t for every i,
// so the solution lies on the constraint curve gamma_p; the minimal branch
// is tau >= tau_star. Solving lambda(gamma_p(tau)) = 1 - t there stays
// well-conditioned at the spectral threshold, where the fixed point of the
// monotone iteration degenerates to a double root. Throws NoConvergence
// when t is below the spectral radius.
FirstPassageVector first_passage(const Weights& p, double t);

// Bottom of the spectrum of Delta_p on the quotient graph, via the largest
// eigenvalue of A_p on Dirichlet truncations at the given increasing
// depths. Uniform weights use an exact radial collapse of the attached
// trees, so large depths stay cheap; general weights build the truncation
// explicitly subject to vertex_cap. force_explicit disables the collapse
// (the two routes must agree, which tests exploit).
SpectralEstimate lambda0_quotient(const CoreGraph& core, std::span<const std::size_t> depths,
                                  const Weights& p, std::size_t vertex_cap = kDefaultBallCap,
                                  bool force_explicit = false);

// Return-rate estimate at the base vertex from N sampled walks of the
// given (even) number of steps. The reported value corrects the raw
// 2m-th root by the local-limit factor m^{3/2}; the raw estimate and a
// binomial confidence interval are included. Walks reaching the
// truncation boundary are counted as non-returning, which is exact while
// depth >= steps/2 + 1 (enforced).
SpectralEstimate mc_return_rate(const TruncatedQuotient& tq, const Weights& p,
                                std::uint64_t steps, std::uint64_t trials, std::uint64_t seed);

} // namespace cogrowth
