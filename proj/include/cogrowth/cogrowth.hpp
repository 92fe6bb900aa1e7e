#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cogrowth/exponents.hpp"
#include "cogrowth/params.hpp"
#include "cogrowth/spectrum.hpp"
#include "cogrowth/subgroups.hpp"

namespace cogrowth {

enum class Branch { supercritical, subcritical };

const char* to_string(Branch b);

// The weight attached to (r, s): p(H(r, s)) above the critical exponent
// delta(r)/2, frozen at the critical value below it.
Weights p_star(const EdgeLengths& r, double s);
Weights p_star(const EdgeLengths& r, double s, double delta_free_value);

// Right-hand side of the generalized formula: lambda(H(r, delta_sub)) in
// the supercritical branch, lambda(H(r, delta(r)/2)) in the subcritical
// one. delta_sub may not exceed delta(r) beyond tolerance.
double cogrowth_lambda(const EdgeLengths& r, double delta_sub);
double cogrowth_lambda(const EdgeLengths& r, double delta_sub, double delta_free_value);

// Classical unit-edge-length formula for the bottom of the spectrum as a
// function of the growth exponent delta in [0, log(2n-1)]:
//   (1/2n)(2n-1-e^delta)(1-e^{-delta})   for delta > log(2n-1)/2,
//   1 - sqrt(2n-1)/n                     otherwise.
// The flat branch uses the value consistent with the closed-form minimum
// (and with Kesten's theorem); the displayed constant 1 - sqrt(2n-1)/2
// found in parts of the literature agrees only at n = 2 and is exposed
// separately for comparison.
double grigorchuk_classic(std::size_t n, double delta_unit);
double kesten_bottom(std::size_t n);           // 1 - sqrt(2n-1)/n
double displayed_bottom(std::size_t n);        // 1 - sqrt(2n-1)/2

struct CogrowthReport {
    std::string key;
    std::size_t rank = 0;
    std::vector<double> r;
    double delta_free_value = 0.0;
    ExponentResult delta_sub;
    Branch branch = Branch::supercritical;
    std::vector<double> weights;  // p_*(r, delta_G)
    double formula_lambda = 0.0;
    SpectralEstimate numeric_lambda;
    double discrepancy = 0.0;
    std::size_t core_size = 0;
    std::optional<std::size_t> index;  // finite subgroup index, when defined
};

struct VerifyConfig {
    std::vector<std::size_t> depths{10, 20, 30};
    std::size_t vertex_cap = kDefaultBallCap;
};

// Full pipeline for one subgroup: exponents, branch, weight, formula value
// and the truncated-spectrum estimate it predicts.
CogrowthReport verify_subgroup(const SubgroupSpec& spec, const EdgeLengths& r,
                               const VerifyConfig& config);

// The five-subgroup verification suite used by the CLI.
std::vector<SubgroupSpec> builtin_suite();

struct AmenabilityPoint {
    std::size_t k = 0;
    double delta_k = 0.0;
    double ratio = 0.0;       // delta_{N_k} / delta
    std::size_t core_size = 0;
};

// Growth-exponent ratios delta_{N_k}(r)/delta(r) along the conjugacy-depth
// exhaustion N_k of the normal closure of the given generators. The
// harness reports the monotone trend only; no amenability verdict is
// drawn from finite data.
std::vector<AmenabilityPoint> amenability_ratio(std::size_t rank,
                                                std::span<const ReducedWord> generators,
                                                const EdgeLengths& r, std::size_t k_max,
                                                std::size_t letter_cap = kDefaultBallCap);

} // namespace cogrowth
