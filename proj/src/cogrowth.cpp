#include "cogrowth/cogrowth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogrowth/errors.hpp"

namespace cogrowth {

const char* to_string(Branch b) {
    return b == Branch::supercritical ? "supercritical" : "subcritical";
}

Weights p_star(const EdgeLengths& r, double s) {
    return p_star(r, s, delta_free(r).value);
}

Weights p_star(const EdgeLengths& r, double s, double delta_free_value) {
    if (!(s >= 0.0)) throw std::invalid_argument("p_star: s must be nonnegative");
    double s_eff = std::max(s, delta_free_value / 2.0);
    auto sol = solve_weights(h_map(r, s_eff));
    return sol.weights();  // u in (0,1)^n keeps D(u) > 0, so never degenerate
}

double cogrowth_lambda(const EdgeLengths& r, double delta_sub) {
    return cogrowth_lambda(r, delta_sub, delta_free(r).value);
}

double cogrowth_lambda(const EdgeLengths& r, double delta_sub, double delta_free_value) {
    if (!(delta_sub >= 0.0))
        throw std::invalid_argument("cogrowth_lambda: delta_sub must be nonnegative");
    if (delta_sub > delta_free_value + 1e-9)
        throw std::invalid_argument("cogrowth_lambda: delta_sub exceeds delta(r)");
    double s_eff = delta_sub > delta_free_value / 2.0 + 1e-12 ? delta_sub
                                                              : delta_free_value / 2.0;
    s_eff = std::min(s_eff, delta_free_value);
    return solve_weights(h_map(r, s_eff)).lambda;
}

double kesten_bottom(std::size_t n) {
    return 1.0 - std::sqrt(2.0 * static_cast<double>(n) - 1.0) / static_cast<double>(n);
}

double displayed_bottom(std::size_t n) {
    return 1.0 - std::sqrt(2.0 * static_cast<double>(n) - 1.0) / 2.0;
}

double grigorchuk_classic(std::size_t n, double delta_unit) {
    if (n < 2) throw std::invalid_argument("grigorchuk_classic: n must be at least 2");
    double top = std::log(2.0 * static_cast<double>(n) - 1.0);
    if (!(delta_unit >= 0.0) || delta_unit > top + 1e-9)
        throw std::invalid_argument("grigorchuk_classic: delta outside [0, log(2n-1)]");
    if (delta_unit > 0.5 * top) {
        double twon = 2.0 * static_cast<double>(n);
        return (twon - 1.0 - std::exp(delta_unit)) * (1.0 - std::exp(-delta_unit)) / twon;
    }
    return kesten_bottom(n);
}

CogrowthReport verify_subgroup(const SubgroupSpec& spec, const EdgeLengths& r,
                               const VerifyConfig& config) {
    CoreGraph core = spec.build(config.vertex_cap);
    CogrowthReport rep;
    rep.key = spec.key;
    rep.rank = r.rank();
    rep.r = r.values();
    rep.delta_free_value = delta_free(r).value;
    rep.delta_sub = delta_subgroup(core, r);
    rep.branch = rep.delta_sub.value > rep.delta_free_value / 2.0 + 1e-12
                     ? Branch::supercritical
                     : Branch::subcritical;
    Weights pw = p_star(r, rep.delta_sub.value, rep.delta_free_value);
    rep.weights = pw.values();
    rep.formula_lambda = cogrowth_lambda(r, rep.delta_sub.value, rep.delta_free_value);
    rep.numeric_lambda = lambda0_quotient(core, config.depths, pw, config.vertex_cap);
    rep.discrepancy = std::abs(rep.formula_lambda - rep.numeric_lambda.value);
    rep.core_size = core.vertex_count();
    rep.index = subgroup_index(core);
    return rep;
}

std::vector<SubgroupSpec> builtin_suite() {
    std::vector<SubgroupSpec> suite;
    suite.push_back({2, {"a", "b"}, false, 0, "01-full"});
    suite.push_back({2, {"a", "bb", "baB"}, false, 0, "02-index2"});
    suite.push_back({2, {"a"}, false, 0, "03-cyclic"});
    suite.push_back({2, {"aa", "bb"}, false, 0, "04-squares"});
    suite.push_back({2, {"a", "baB"}, false, 0, "05-conjugate-pair"});
    return suite;
}

std::vector<AmenabilityPoint> amenability_ratio(std::size_t rank,
                                                std::span<const ReducedWord> generators,
                                                const EdgeLengths& r, std::size_t k_max,
                                                std::size_t letter_cap) {
    if (generators.empty())
        throw std::invalid_argument("amenability_ratio: generators must be nonempty");
    double delta = delta_free(r).value;
    std::vector<AmenabilityPoint> out;
    out.reserve(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        CoreGraph core = normal_closure_exhaustion(rank, generators, k, letter_cap);
        AmenabilityPoint pt;
        pt.k = k;
        pt.delta_k = delta_subgroup(core, r).value;
        pt.ratio = pt.delta_k / delta;
        pt.core_size = core.vertex_count();
        out.push_back(pt);
    }
    return out;
}

} // namespace cogrowth
