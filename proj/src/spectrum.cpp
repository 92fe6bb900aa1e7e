#include "cogrowth/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogrowth/errors.hpp"
#include "cogrowth/exponents.hpp"
#include "cogrowth/rng.hpp"

namespace cogrowth {

const char* to_string(SpectralMethod m) {
    switch (m) {
        case SpectralMethod::closed_form_min: return "closed-form-min";
        case SpectralMethod::gamma_max: return "gamma-max";
        case SpectralMethod::first_passage: return "first-passage";
        case SpectralMethod::truncated_power_iteration: return "truncated-power-iteration";
        case SpectralMethod::monte_carlo: return "monte-carlo";
    }
    return "?";
}

double tau_star(const Weights& p) {
    const double n1 = static_cast<double>(p.rank()) - 1.0;
    auto g = [&](double tau) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.rank(); ++i) s += tau / std::hypot(tau, 2.0 * p[i]);
        return s - n1;
    };
    double lo = 1e-12, hi = 1.0;
    while (g(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw ConsistencyError("tau_star: root not bracketed");
    }
    for (int it = 0; it < 120 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double tau = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {  // Newton polish
        double val = 0.0, deriv = 0.0;
        for (std::size_t i = 0; i < p.rank(); ++i) {
            double root = std::hypot(tau, 2.0 * p[i]);
            val += tau / root;
            deriv += 4.0 * p[i] * p[i] / (root * root * root);
        }
        val -= n1;
        if (deriv <= 0.0) break;
        tau -= val / deriv;
    }
    return tau;
}

double rho_eq1(const Weights& p) {
    const double n1 = static_cast<double>(p.rank()) - 1.0;
    // The objective is unimodal; its derivative has the sign of
    // (n-1) - sum_i 1/sqrt(1 + 4 p_i^2 t^2).
    auto dsign = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.rank(); ++i) s += 1.0 / std::hypot(1.0, 2.0 * p[i] * t);
        return n1 - s;
    };
    double lo = 1e-12, hi = 1.0;
    while (dsign(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw ConsistencyError("rho_eq1: minimum not bracketed");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (dsign(mid) < 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.rank(); ++i) sum += std::hypot(1.0, 2.0 * p[i] * t);
    return (sum - n1) / t;
}

double rho_gamma(const Weights& p) {
    return 1.0 - lambda_along_gamma(p, tau_star(p)).value;
}

SpectralEstimate rho_free(const Weights& p) {
    SpectralEstimate est;
    est.method = SpectralMethod::closed_form_min;
    est.value = rho_eq1(p);
    est.cross_check = rho_gamma(p);
    est.error_bound = std::abs(est.value - *est.cross_check);
    return est;
}

EdgeLengths r_for_p(const Weights& p) {
    auto [r, s0] = h_inverse(gamma_curve(p, tau_star(p)));
    double delta = delta_free(r).value;
    if (std::abs(2.0 * s0 - delta) > 1e-9)
        throw ConsistencyError("r_for_p: 2 s0 does not match delta(r)");
    return r;
}

namespace {

// Residual of the defining quadratic system at u.
double fp_residual(const Weights& p, double t, const std::vector<double>& u) {
    const std::size_t n = p.rank();
    double dot = 0.0;
    for (std::size_t k = 0; k < n; ++k) dot += p[k] * u[k];
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fi = (p[i] + p[i] * u[i] * u[i] + 2.0 * (dot - p[i] * u[i]) * u[i]) / t;
        r = std::max(r, std::abs(fi - u[i]));
    }
    return r;
}

} // namespace

FirstPassageVector first_passage(const Weights& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("first_passage: t must be positive");
    const double target = 1.0 - t;
    const double tstar = tau_star(p);
    const double lambda_max = lambda_along_gamma(p, tstar).value;

    FirstPassageVector out;
    out.t = t;
    if (target > lambda_max + 1e-12)
        throw NoConvergence("first_passage: t below the spectral radius, no solution in (0,1]^n");

    double tau;
    std::uint64_t iterations = 0;
    if (target >= lambda_max - 1e-13) {
        // numerically at the threshold; the curve maximum is the minimal
        // (double-root) solution
        tau = tstar;
        out.at_threshold = true;
    } else {
        auto value_at = [&](double x) { return lambda_along_gamma(p, x).value; };
        double lo = tstar, hi = std::max(2.0 * tstar, 1.0);
        while (value_at(hi) > target) {
            hi *= 2.0;
            ++iterations;
            if (hi > 1e12) throw ConsistencyError("first_passage: tau not bracketed");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it, ++iterations) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (value_at(mid) > target ? lo : hi) = mid;
        }
        tau = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it, ++iterations) {  // Newton polish
            auto lg = lambda_along_gamma(p, tau);
            if (!(lg.derivative < 0.0)) break;
            double next = tau - (lg.value - target) / lg.derivative;
            if (!(next > tstar)) break;
            tau = next;
        }
    }
    out.values = gamma_curve(p, tau).values();
    out.residual = fp_residual(p, t, out.values);
    out.iterations = iterations;
    return out;
}

namespace {

// Power iteration with a +I shift; apply() must implement the bare
// operator, inner products are taken against the supplied vertex weights.
// Convergence follows the Rayleigh quotient moving less than tol over a
// 100-step window.
struct PowerIteration {
    double rho = 0.0;
    bool converged = false;
    std::uint64_t iterations = 0;
};

template <typename Apply>
PowerIteration power_iterate(std::size_t size, const std::vector<double>& mass, Apply&& apply,
                             std::uint64_t max_iterations) {
    SplitMix64 rng(0x9c0ffee123456789ULL);
    std::vector<double> x(size), y(size);
    for (auto& v : x) v = 0.5 + rng.next_double();
    std::vector<double> window(100, -1.0);
    PowerIteration out;
    for (std::uint64_t it = 0; it < max_iterations; ++it) {
        apply(x, y);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            num += mass[i] * x[i] * y[i];
            den += mass[i] * x[i] * x[i];
        }
        double rq = num / den;
        out.iterations = it + 1;
        double prev = window[it % 100];
        window[it % 100] = rq;
        out.rho = rq;
        if (prev >= -0.5 && std::abs(rq - prev) < 1e-12) {
            out.converged = true;
            break;
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            y[i] += x[i];  // +I shift keeps bipartite spectra from oscillating
            norm += mass[i] * y[i] * y[i];
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < size; ++i) x[i] = y[i] / norm;
    }
    return out;
}

// Largest eigenvalue of A_p on the depth-L Dirichlet truncation, with the
// attached trees collapsed to radial classes of multiplicity (2n-1)^(d-1).
// Valid for uniform p, where branch permutations are weight-preserving.
double rho_radial(const CoreGraph& core, std::size_t L) {
    const std::size_t n = core.rank();
    const std::size_t slots = 2 * n;
    const double p = 0.5 / static_cast<double>(n);
    const double q = static_cast<double>(2 * n - 1);
    const std::size_t V = core.vertex_count();

    std::vector<std::size_t> missing_at;  // core vertex per missing half-edge
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t s = 0; s < slots; ++s)
            if (core.neighbor(v, CoreGraph::slot_letter(s)) == CoreGraph::npos)
                missing_at.push_back(v);
    const std::size_t H = missing_at.size();
    const std::size_t D = L >= 1 ? L - 1 : 0;  // interior chain depths 1..L-1
    const std::size_t size = V + H * D;

    std::vector<double> mass(size, 1.0);
    for (std::size_t h = 0; h < H; ++h)
        for (std::size_t d = 0; d < D; ++d)
            mass[V + h * D + d] = std::pow(q, static_cast<double>(d));

    std::vector<std::vector<std::uint32_t>> core_adj(V);
    for (std::size_t v = 0; v < V; ++v)
        for (std::size_t s = 0; s < slots; ++s) {
            std::size_t w = core.neighbor(v, CoreGraph::slot_letter(s));
            if (w != CoreGraph::npos) core_adj[v].push_back(static_cast<std::uint32_t>(w));
        }

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t v = 0; v < V; ++v) {
            double acc = 0.0;
            for (std::uint32_t w : core_adj[v]) acc += x[w];
            y[v] = p * acc;
        }
        for (std::size_t h = 0; h < H; ++h) {
            const std::size_t base = V + h * D;
            if (D == 0) continue;
            y[missing_at[h]] += p * x[base];
            for (std::size_t d = 0; d < D; ++d) {
                double acc = d == 0 ? x[missing_at[h]] : x[base + d - 1];
                if (d + 1 < D) acc += q * x[base + d + 1];
                y[base + d] = p * acc;
            }
        }
    };
    auto res = power_iterate(size, mass, apply, 1'000'000);
    return res.rho;
}

// Largest eigenvalue of A_p on an explicit truncation with Dirichlet
// boundary.
double rho_explicit(const TruncatedQuotient& tq, const Weights& p, bool* converged) {
    const std::size_t slots = 2 * tq.rank;
    const std::size_t V = tq.vertex_count();
    std::vector<double> pslot(slots);
    for (std::size_t s = 0; s < slots; ++s) pslot[s] = p[s / 2];
    std::vector<char> boundary(V, 0);
    for (std::uint32_t b : tq.boundary) boundary[b] = 1;

    std::vector<double> mass(V, 1.0);
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t v = 0; v < V; ++v) {
            if (boundary[v]) {
                y[v] = 0.0;
                continue;
            }
            double acc = 0.0;
            for (std::size_t s = 0; s < slots; ++s) {
                std::uint32_t w = tq.adjacency[v * slots + s];
                if (w != TruncatedQuotient::none && !boundary[w]) acc += pslot[s] * x[w];
            }
            y[v] = acc;
        }
    };
    auto res = power_iterate(V, mass, apply, 60'000);
    if (converged) *converged = res.converged;
    return res.rho;
}

} // namespace

SpectralEstimate lambda0_quotient(const CoreGraph& core, std::span<const std::size_t> depths,
                                  const Weights& p, std::size_t vertex_cap,
                                  bool force_explicit) {
    if (depths.empty()) throw std::invalid_argument("lambda0_quotient: depths must be nonempty");
    for (std::size_t i = 1; i < depths.size(); ++i)
        if (depths[i] <= depths[i - 1])
            throw std::invalid_argument("lambda0_quotient: depths must be increasing");
    if (core.rank() != p.rank())
        throw std::invalid_argument("lambda0_quotient: rank mismatch");

    SpectralEstimate est;
    est.method = SpectralMethod::truncated_power_iteration;
    const bool radial = p.is_uniform() && !force_explicit;
    est.notes = radial ? "radial" : "explicit";
    bool all_converged = true;
    for (std::size_t L : depths) {
        double rho;
        if (radial) {
            rho = rho_radial(core, L);
        } else {
            bool conv = true;
            rho = rho_explicit(truncate_quotient(core, L, vertex_cap), p, &conv);
            all_converged = all_converged && conv;
        }
        est.depths.push_back(L);
        est.depth_values.push_back(std::clamp(1.0 - rho, 0.0, 1.0));
    }
    est.value = est.depth_values.back();
    if (!all_converged) est.notes += ";stagnation";

    const std::size_t m = est.depth_values.size();
    if (m >= 3) {
        double x0 = est.depth_values[m - 3], x1 = est.depth_values[m - 2],
               x2 = est.depth_values[m - 1];
        double d2 = (x2 - x1) - (x1 - x0);
        if (std::abs(d2) > 1e-300) {
            est.extrapolated = x2 - (x2 - x1) * (x2 - x1) / d2;
            est.error_bound = std::abs(est.value - *est.extrapolated);
        }
    }
    if (!est.error_bound && m >= 2)
        est.error_bound = std::abs(est.depth_values[m - 1] - est.depth_values[m - 2]);
    return est;
}

SpectralEstimate mc_return_rate(const TruncatedQuotient& tq, const Weights& p,
                                std::uint64_t steps, std::uint64_t trials, std::uint64_t seed) {
    if (steps < 2 || steps % 2 != 0)
        throw std::invalid_argument("mc_return_rate: steps must be even and positive");
    if (trials == 0) throw std::invalid_argument("mc_return_rate: trials must be positive");
    if (tq.rank != p.rank()) throw std::invalid_argument("mc_return_rate: rank mismatch");
    if (tq.missing_half_edges > 0 && tq.depth < steps / 2 + 1)
        throw std::invalid_argument(
            "mc_return_rate: truncation depth must exceed steps/2 for an exact return count");

    const std::size_t slots = 2 * tq.rank;
    std::vector<double> cumulative(slots);
    double acc = 0.0;
    for (std::size_t s = 0; s < slots; ++s) {
        acc += p[s / 2];
        cumulative[s] = acc;
    }
    cumulative.back() = 1.0;

    std::uint64_t returns = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        SplitMix64 rng(mix_seed(seed, trial));
        std::uint32_t pos = 0;
        bool alive = true;
        for (std::uint64_t step = 0; step < steps; ++step) {
            double x = rng.next_double();
            std::size_t s = 0;
            while (s + 1 < slots && x >= cumulative[s]) ++s;
            std::uint32_t nxt = tq.adjacency[pos * slots + s];
            if (nxt == TruncatedQuotient::none) {
                alive = false;  // walk left the truncation; it cannot return
                break;
            }
            pos = nxt;
        }
        if (alive && pos == 0) ++returns;
    }

    const double m = static_cast<double>(steps) / 2.0;
    const double phat = static_cast<double>(returns) / static_cast<double>(trials);
    const double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double center = (phat + z * z / (2.0 * nt)) / (1.0 + z * z / nt);
    const double half =
        z / (1.0 + z * z / nt) *
        std::sqrt(phat * (1.0 - phat) / nt + z * z / (4.0 * nt * nt));
    const double plo = std::max(0.0, center - half), phi_ = std::min(1.0, center + half);

    auto to_rate = [&](double prob) {
        if (prob <= 0.0) return 0.0;
        return std::min(1.0, std::pow(prob * std::pow(m, 1.5), 1.0 / static_cast<double>(steps)));
    };

    SpectralEstimate est;
    est.method = SpectralMethod::monte_carlo;
    est.samples = trials;
    est.steps = steps;
    est.seed = seed;
    est.rng = kRngName;
    est.value = to_rate(phat);
    est.raw_value = phat > 0.0 ? std::pow(phat, 1.0 / static_cast<double>(steps)) : 0.0;
    est.ci_lo = to_rate(plo);
    est.ci_hi = to_rate(phi_);
    est.error_bound = 0.5 * (*est.ci_hi - *est.ci_lo);
    if (returns == 0) {
        est.notes = "zero-returns;lower-bound-only";
        est.error_bound.reset();
    }
    return est;
}

} // namespace cogrowth
