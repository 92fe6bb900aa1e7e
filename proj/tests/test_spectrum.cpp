#include "doctest.h"

#include <cmath>
#include <vector>

#include "cogrowth/errors.hpp"
#include "cogrowth/exponents.hpp"
#include "cogrowth/rng.hpp"
#include "cogrowth/spectrum.hpp"

using namespace cogrowth;

namespace {

std::vector<double> random_simplex(SplitMix64& rng, std::size_t n, double floor_ratio = 0.1) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (auto& x : v) {
        x = floor_ratio + (1.0 - floor_ratio) * rng.next_double();
        sum += x;
    }
    for (auto& x : v) x *= 0.5 / sum;
    return v;
}

double kesten_rho(std::size_t n) {
    return std::sqrt(2.0 * static_cast<double>(n) - 1.0) / static_cast<double>(n);
}

bool fp_converges(const Weights& p, double t) {
    try {
        first_passage(p, t);
        return true;
    } catch (const NoConvergence&) {
        return false;
    }
}

// Exact 2m-step return probability of the weighted walk on the tree,
// through the distance-profile chain: from the root every step goes out,
// from distance d >= 1 the walk steps in with the probability of its
// incoming letter... for uniform p the profile chain is exact.
double exact_uniform_return(std::size_t n, std::size_t steps) {
    double pin = 0.5 / static_cast<double>(n);
    double pout_root = 1.0;
    double pout = 1.0 - pin;
    std::vector<double> prob(steps + 2, 0.0);
    prob[0] = 1.0;
    for (std::size_t s = 0; s < steps; ++s) {
        std::vector<double> next(steps + 2, 0.0);
        for (std::size_t d = 0; d + 1 < prob.size(); ++d) {
            if (prob[d] == 0.0) continue;
            if (d == 0) {
                next[1] += prob[0] * pout_root;
            } else {
                next[d - 1] += prob[d] * pin;
                next[d + 1] += prob[d] * pout;
            }
        }
        prob = std::move(next);
    }
    return prob[0];
}

} // namespace

TEST_CASE("tau_star closed form and defining property") {
    CHECK(tau_star(Weights::uniform(2)) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));

    SplitMix64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.next() % 4;
        Weights p(random_simplex(rng, n));
        double tau = tau_star(p);
        CHECK(std::abs(lambda_along_gamma(p, tau).derivative) < 1e-12);
    }

    // the stationary point is a local maximum of lambda along the curve
    Weights skew(std::vector<double>{0.4, 0.1});
    double tau = tau_star(skew);
    double center = lambda_along_gamma(skew, tau).value;
    CHECK(center > lambda_along_gamma(skew, tau + 0.01).value);
    CHECK(center > lambda_along_gamma(skew, tau - 0.01).value);
}

TEST_CASE("rho closed forms for uniform weights") {
    CHECK(std::abs(rho_eq1(Weights::uniform(2)) - std::sqrt(3.0) / 2.0) < 1e-10);
    CHECK(std::abs(rho_gamma(Weights::uniform(2)) - std::sqrt(3.0) / 2.0) < 1e-10);
    for (std::size_t n = 3; n <= 5; ++n) {
        double expect = kesten_rho(n);
        CHECK(std::abs(rho_eq1(Weights::uniform(n)) - expect) < 1e-10);
        CHECK(std::abs(rho_gamma(Weights::uniform(n)) - expect) < 1e-10);
    }
}

TEST_CASE("rho routes agree off the uniform locus") {
    Weights skew(std::vector<double>{0.4, 0.1});
    double r1 = rho_eq1(skew), r2 = rho_gamma(skew);
    CHECK(std::abs(r1 - r2) < 1e-10);
    CHECK(r1 == doctest::Approx(0.9070152152607571).epsilon(1e-9));

    auto est = rho_free(skew);
    CHECK(est.value == doctest::Approx(r1));
    CHECK(est.cross_check.has_value());
    CHECK(*est.error_bound < 1e-10);
}

TEST_CASE("three-way agreement with the first-passage threshold") {
    SplitMix64 rng(424243);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.next() % 3;
        Weights p(random_simplex(rng, n));
        double r1 = rho_eq1(p), r2 = rho_gamma(p);
        REQUIRE(std::abs(r1 - r2) < 1e-8);

        double lo = r1 - 0.02, hi = r1 + 0.02;
        REQUIRE_FALSE(fp_converges(p, lo));
        REQUIRE(fp_converges(p, hi));
        while (hi - lo > 5e-9) {
            double mid = 0.5 * (lo + hi);
            (fp_converges(p, mid) ? hi : lo) = mid;
        }
        REQUIRE(std::abs(0.5 * (lo + hi) - r1) < 1e-8);
    }
}

TEST_CASE("first_passage closed forms at rank 2") {
    Weights p = Weights::uniform(2);

    auto at1 = first_passage(p, 1.0);
    CHECK(std::abs(at1.values[0] - 1.0 / 3.0) < 1e-10);
    CHECK(std::abs(at1.values[1] - 1.0 / 3.0) < 1e-10);
    CHECK(at1.values[0] < 1.0);  // transient walk hits a generator with probability < 1

    auto crit = first_passage(p, std::sqrt(3.0) / 2.0);
    CHECK(std::abs(crit.values[0] - 1.0 / std::sqrt(3.0)) < 1e-10);
    CHECK(std::abs(crit.values[1] - 1.0 / std::sqrt(3.0)) < 1e-10);

    CHECK_THROWS_AS(first_passage(p, 0.5), NoConvergence);
}

TEST_CASE("first_passage satisfies its quadratic system") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + rng.next() % 3;
        Weights p(random_simplex(rng, n));
        double rho = rho_eq1(p);
        double t = rho + (trial % 2 ? 0.3 : 1e-4) * rng.next_double();
        auto fp = first_passage(p, t);
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i) dot += p[k] * fp.values[k];
            double rhs = (p[i] + p[i] * fp.values[i] * fp.values[i] +
                          2.0 * dot * fp.values[i]) / t;
            REQUIRE(std::abs(rhs - fp.values[i]) < 1e-12);
            REQUIRE(fp.values[i] > 0.0);
            REQUIRE(fp.values[i] <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("first_passage components decrease in t") {
    Weights p(std::vector<double>{0.35, 0.15});
    double rho = rho_eq1(p);
    std::vector<double> prev;
    for (double t = rho + 1e-6; t < rho + 1.0; t += 0.11) {
        auto fp = first_passage(p, t);
        if (!prev.empty())
            for (std::size_t i = 0; i < prev.size(); ++i) CHECK(fp.values[i] < prev[i]);
        prev = fp.values;
    }
}

TEST_CASE("lambda0_quotient vanishes on finite quotients") {
    Weights p = Weights::uniform(2);
    std::vector<std::size_t> depths{4, 8};
    for (auto gens : {std::vector<const char*>{"a", "b"}, {"a", "bb", "baB"}}) {
        std::vector<ReducedWord> ws;
        for (auto* g : gens) ws.push_back(parse_word(g, 2));
        auto est = lambda0_quotient(fold(2, ws), depths, p);
        CHECK(est.value <= 1e-12);
    }
    // also with non-uniform weights on the explicit route
    Weights q(std::vector<double>{0.3, 0.2});
    auto est = lambda0_quotient(fold(2, {"a", "bb", "baB"}), depths, q);
    CHECK(est.value <= 1e-12);
}

TEST_CASE("lambda0_quotient matches dense-eigensolve references on the tree") {
    // reference eigenvalues computed independently from the collapsed
    // radial chain of the 4-regular tree with Dirichlet truncation
    Weights p = Weights::uniform(2);
    CoreGraph trivial = fold(2, std::vector<ReducedWord>{});
    std::vector<std::size_t> depths{10, 20, 30};
    auto est = lambda0_quotient(trivial, depths, p);
    CHECK(est.depth_values[0] == doctest::Approx(0.1640949964).epsilon(1e-7));
    CHECK(est.depth_values[1] == doctest::Approx(0.1428210354).epsilon(1e-7));
    CHECK(est.depth_values[2] == doctest::Approx(0.1381496808).epsilon(1e-7));
    // monotone from above toward 1 - sqrt(3)/2
    double target = 1.0 - std::sqrt(3.0) / 2.0;
    CHECK(est.depth_values[0] > est.depth_values[1]);
    CHECK(est.depth_values[1] > est.depth_values[2]);
    CHECK(est.value > target);
    CHECK(est.value - target < 1e-2);
    CHECK(est.extrapolated.has_value());
    CHECK(std::abs(*est.extrapolated - target) < est.value - target);
}

TEST_CASE("radial collapse agrees with the explicit truncation") {
    Weights p = Weights::uniform(2);
    std::vector<std::size_t> depths{6};
    for (auto gens : {std::vector<const char*>{"a"}, {"aa", "bb"}, {"a", "baB"}}) {
        std::vector<ReducedWord> ws;
        for (auto* g : gens) ws.push_back(parse_word(g, 2));
        CoreGraph core = fold(2, ws);
        auto radial = lambda0_quotient(core, depths, p);
        auto explicit_route = lambda0_quotient(core, depths, p, kDefaultBallCap, true);
        CHECK(radial.notes.substr(0, 6) == "radial");
        CHECK(explicit_route.notes.substr(0, 8) == "explicit");
        CHECK(std::abs(radial.value - explicit_route.value) < 1e-9);
    }
}

TEST_CASE("lambda0 estimates are nonincreasing in depth for every suite core") {
    Weights p = Weights::uniform(2);
    std::vector<std::size_t> depths{5, 10, 15, 20};
    for (auto gens : {std::vector<const char*>{"a"}, {"aa", "bb"}, {"a", "baB"}}) {
        std::vector<ReducedWord> ws;
        for (auto* g : gens) ws.push_back(parse_word(g, 2));
        auto est = lambda0_quotient(fold(2, ws), depths, p);
        for (std::size_t i = 1; i < est.depth_values.size(); ++i)
            CHECK(est.depth_values[i] <= est.depth_values[i - 1] + 1e-12);
    }
}

TEST_CASE("lifting along nested subgroups") {
    Weights p = Weights::uniform(2);
    std::vector<std::size_t> depths{12};
    // <a> inside <a, bab^-1>: the smaller subgroup has the larger bottom
    double small = lambda0_quotient(fold(2, {"a"}), depths, p).value;
    double large = lambda0_quotient(fold(2, {"a", "baB"}), depths, p).value;
    CHECK(small >= large - 1e-6);

    double squares = lambda0_quotient(fold(2, {"aa", "bb"}), depths, p).value;
    double full = lambda0_quotient(fold(2, {"a", "b"}), depths, p).value;
    CHECK(squares >= full - 1e-6);
}

TEST_CASE("mc_return_rate is deterministic and matches exact return probabilities") {
    Weights p = Weights::uniform(2);
    CoreGraph trivial = fold(2, std::vector<ReducedWord>{});
    TruncatedQuotient tq = truncate_quotient(trivial, 8);

    auto est1 = mc_return_rate(tq, p, 12, 200000, 99);
    auto est2 = mc_return_rate(tq, p, 12, 200000, 99);
    CHECK(est1.value == est2.value);
    CHECK(*est1.raw_value == *est2.raw_value);
    CHECK(est1.rng == "splitmix64");
    CHECK(est1.seed == 99);

    double exact = exact_uniform_return(2, 12);
    double phat = std::pow(*est1.raw_value, 12.0);
    double sigma = std::sqrt(exact * (1.0 - exact) / 200000.0);
    CHECK(std::abs(phat - exact) < 5.0 * sigma);
    // the CI brackets the corrected value
    CHECK(*est1.ci_lo <= est1.value);
    CHECK(est1.value <= *est1.ci_hi);

    auto other_seed = mc_return_rate(tq, p, 12, 200000, 100);
    CHECK(other_seed.value != est1.value);  // different stream, different sample
}

TEST_CASE("mc_return_rate on a finite quotient approaches 1") {
    Weights p = Weights::uniform(2);
    CoreGraph index2 = fold(2, {"a", "bb", "baB"});
    TruncatedQuotient tq = truncate_quotient(index2, 0);
    auto est = mc_return_rate(tq, p, 200, 20000, 4242);
    CHECK(est.value > 0.95);
    CHECK(est.value <= 1.0);
}

TEST_CASE("mc_return_rate guards") {
    Weights p = Weights::uniform(2);
    CoreGraph trivial = fold(2, std::vector<ReducedWord>{});
    CHECK_THROWS_AS(mc_return_rate(truncate_quotient(trivial, 4), p, 12, 100, 1),
                    std::invalid_argument);  // depth too shallow for the step count
    CHECK_THROWS_AS(mc_return_rate(truncate_quotient(trivial, 8), p, 11, 100, 1),
                    std::invalid_argument);  // odd step count

    // zero observed returns: lower bound only, no throw
    auto est = mc_return_rate(truncate_quotient(trivial, 13), p, 24, 3, 7);
    CHECK(est.value == 0.0);
    CHECK(est.notes.find("zero-returns") != std::string::npos);
    CHECK_FALSE(est.error_bound.has_value());
    CHECK(est.ci_hi.has_value());
}

TEST_CASE("r_for_p consistency on symmetric and random weights") {
    auto r2 = r_for_p(Weights::uniform(2));
    CHECK(r2[0] == doctest::Approx(0.25).epsilon(1e-9));
    auto r3 = r_for_p(Weights::uniform(3));
    CHECK(r3[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

    SplitMix64 rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + rng.next() % 2;
        Weights p(random_simplex(rng, n));
        EdgeLengths r = r_for_p(p);  // throws on consistency failure
        double lam = solve_weights(h_map(r, delta_free(r).value / 2.0)).lambda;
        CHECK(std::abs((1.0 - lam) - rho_eq1(p)) < 1e-8);
    }
}
