#include "cogrowth/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cogrowth/errors.hpp"

namespace cogrowth {

namespace {

constexpr double kSimplexTol = 1e-12;

void check_simplex(const std::vector<double>& v, const char* what) {
    if (v.size() < 2)
        throw std::invalid_argument(std::string(what) + ": rank must be at least 2");
    double sum = 0.0;
    for (double x : v) {
        if (!(x > 0.0))
            throw std::invalid_argument(std::string(what) + ": entries must be positive");
        sum += x;
    }
    if (std::abs(sum - 0.5) > kSimplexTol)
        throw std::invalid_argument(std::string(what) + ": entries must sum to 1/2");
}

} // namespace

EdgeLengths::EdgeLengths(std::vector<double> values) : values_(std::move(values)) {
    check_simplex(values_, "EdgeLengths");
}

EdgeLengths EdgeLengths::uniform(std::size_t rank) {
    if (rank < 2) throw std::invalid_argument("EdgeLengths: rank must be at least 2");
    return EdgeLengths(std::vector<double>(rank, 0.5 / static_cast<double>(rank)));
}

double EdgeLengths::edge_length(std::size_t i) const { return -std::log(values_[i]); }

double EdgeLengths::min_edge_length() const {
    return -std::log(*std::max_element(values_.begin(), values_.end()));
}

Weights::Weights(std::vector<double> values) : values_(std::move(values)) {
    check_simplex(values_, "Weights");
}

Weights Weights::uniform(std::size_t rank) {
    if (rank < 2) throw std::invalid_argument("Weights: rank must be at least 2");
    return Weights(std::vector<double>(rank, 0.5 / static_cast<double>(rank)));
}

bool Weights::is_uniform(double tol) const {
    auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    return *hi - *lo <= tol;
}

UVector::UVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2)
        throw std::invalid_argument("UVector: rank must be at least 2");
    for (double u : values_)
        if (!(u > 0.0) || !(u < 1.0))
            throw std::invalid_argument("UVector: entries must lie in (0,1)");
}

bool AlgebraicSolution::in_simplex() const {
    if (boundary) return false;
    for (double p : weight_values)
        if (!(p > 0.0)) return false;
    return true;
}

Weights AlgebraicSolution::weights() const {
    if (!in_simplex())
        throw std::domain_error("AlgebraicSolution: weights lie outside the open simplex");
    return Weights(weight_values);
}

UVector h_map(const EdgeLengths& r, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("h_map: s must be positive");
    std::vector<double> u(r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i)
        u[i] = std::pow(r[i], s);
    return UVector(std::move(u));
}

std::pair<EdgeLengths, double> h_inverse(const UVector& u) {
    const std::size_t n = u.rank();
    std::vector<double> logu(n);
    for (std::size_t i = 0; i < n; ++i) logu[i] = std::log(u[i]);

    // g(s) = sum u_i^{1/s} - 1/2 is strictly increasing in s,
    // with limits -1/2 (s -> 0) and n - 1/2 (s -> infinity).
    auto g = [&](double s) {
        double sum = 0.0;
        for (double lu : logu) sum += std::exp(lu / s);
        return sum - 0.5;
    };

    double lo = 1e-9, hi = 1e9;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);

    // Newton polish so that sum r_i lands on 1/2 to machine precision.
    for (int iter = 0; iter < 8; ++iter) {
        double val = 0.0, deriv = 0.0;
        for (double lu : logu) {
            double t = std::exp(lu / s);
            val += t;
            deriv += t * (-lu) / (s * s);
        }
        val -= 0.5;
        if (deriv <= 0.0) break;
        double step = val / deriv;
        double next = s - step;
        if (!(next > lo * 0.5) || !(next < hi * 2.0)) break;
        s = next;
        if (std::abs(step) < 1e-16 * s) break;
    }

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::exp(logu[i] / s);
    return {EdgeLengths(std::move(r)), s};
}

double c_eval(std::span<const double> u, std::span<const double> p, std::size_t i) {
    if (u.size() != p.size()) throw std::invalid_argument("c_eval: size mismatch");
    if (i >= u.size()) throw std::invalid_argument("c_eval: index out of range");
    if (u[i] == 0.0) throw std::invalid_argument("c_eval: u_i must be nonzero");
    double dot = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * p[k];
    return 1.0 - 2.0 * dot - (1.0 / u[i] - u[i]) * p[i];
}

double c_eval(const UVector& u, const Weights& p, std::size_t i) {
    return c_eval(std::span<const double>(u.values()), std::span<const double>(p.values()), i);
}

namespace {

// Accumulates sums of signed terms given as (sign, log|term|), factoring out
// the largest magnitude so that only ratios are exponentiated.
struct SignedLogSum {
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> terms;  // (sign, log magnitude)

    void add(double sign, double log_mag) {
        if (sign == 0.0) return;
        terms.emplace_back(sign, log_mag);
        max_log = std::max(max_log, log_mag);
    }
    // Sum of sign * exp(log_mag - ref).
    double scaled_sum(double ref) const {
        double s = 0.0;
        for (auto [sign, lm] : terms) s += sign * std::exp(lm - ref);
        return s;
    }
};

AlgebraicSolution solve_weights_logspace(std::span<const double> u, std::size_t n) {
    // f_k = 1/u_k - u_k, tracked as sign and log magnitude.
    std::vector<double> sign(n), logmag(n);
    for (std::size_t k = 0; k < n; ++k) {
        double f = 1.0 / u[k] - u[k];
        sign[k] = f > 0.0 ? 1.0 : (f < 0.0 ? -1.0 : 0.0);
        logmag[k] = std::log(std::abs(f));
    }
    double total_log = 0.0, total_sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        total_log += logmag[k];
        total_sign *= sign[k];
    }
    // P_i = prod_{k != i} f_k.
    std::vector<double> plog(n), psign(n);
    double pmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        plog[i] = total_log - logmag[i];
        psign[i] = total_sign * sign[i];  // dividing by f_i flips by its sign
        pmax = std::max(pmax, plog[i]);
    }
    double d_scaled = 0.0;
    for (std::size_t i = 0; i < n; ++i) d_scaled += psign[i] * std::exp(plog[i] - pmax);
    if (std::abs(d_scaled) < 1e-14)
        throw DegenerateDeterminant("solve_weights: determinant vanishes");

    AlgebraicSolution out;
    out.determinant = d_scaled * std::exp(pmax);
    out.weight_values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.weight_values[i] = psign[i] * std::exp(plog[i] - pmax) / (2.0 * d_scaled);

    // lambda = ( sum_j (1-u_j) P_j - prod f / 2 ) / D, with the same scaling.
    SignedLogSum num;
    for (std::size_t j = 0; j < n; ++j) {
        double c = 1.0 - u[j];
        if (c != 0.0)
            num.add(psign[j] * (c > 0 ? 1.0 : -1.0), plog[j] + std::log(std::abs(c)));
    }
    num.add(-0.5 * total_sign, total_log);
    out.lambda = num.scaled_sum(pmax) / d_scaled;
    return out;
}

} // namespace

AlgebraicSolution solve_weights(std::span<const double> u) {
    const std::size_t n = u.size();
    if (n < 2) throw std::invalid_argument("solve_weights: rank must be at least 2");
    std::size_t ones = 0, one_index = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(u[k] > 0.0))
            throw std::invalid_argument("solve_weights: entries must be positive");
        if (u[k] == 1.0) {
            ++ones;
            one_index = k;
        }
    }
    if (ones >= 2)
        throw DegenerateDeterminant("solve_weights: more than one u_j equals 1, D(u) = 0");

    if (ones == 1) {
        // Boundary solution: p_j = 1/2 at the flat coordinate, lambda = 0.
        AlgebraicSolution out;
        out.weight_values.assign(n, 0.0);
        out.weight_values[one_index] = 0.5;
        out.lambda = 0.0;
        out.boundary = true;
        out.boundary_index = one_index;
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != one_index) prod *= 1.0 / u[k] - u[k];
        out.determinant = prod;  // the only surviving term of D
        if (out.determinant == 0.0)
            throw DegenerateDeterminant("solve_weights: determinant vanishes on boundary input");
        return out;
    }

    if (n > 8) {
        std::vector<double> uc(u.begin(), u.end());
        return solve_weights_logspace(uc, n);
    }

    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = 1.0 / u[k] - u[k];
    std::vector<double> partial(n);
    double det = 0.0, max_partial = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) prod *= f[k];
        partial[i] = prod;
        det += prod;
        max_partial = std::max(max_partial, std::abs(prod));
    }
    if (std::abs(det) < 1e-14 * max_partial)
        throw DegenerateDeterminant("solve_weights: determinant vanishes");

    AlgebraicSolution out;
    out.determinant = det;
    out.weight_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.weight_values[i] = partial[i] / (2.0 * det);

    double full = partial[0] * f[0];
    double num = -0.5 * full;
    for (std::size_t j = 0; j < n; ++j) num += (1.0 - u[j]) * partial[j];
    out.lambda = num / det;
    return out;
}

AlgebraicSolution solve_weights(const UVector& u) {
    return solve_weights(std::span<const double>(u.values()));
}

double l_eval(std::span<const double> u) {
    const std::size_t n = u.size();
    double full = 1.0;
    for (double x : u) {
        if (!(x >= 0.0)) throw std::invalid_argument("l_eval: entries must be nonnegative");
        full *= 1.0 + x;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += u[j] * (full / (1.0 + u[j]));
    return 2.0 * sum - full;
}

double l_eval_expanded(std::span<const double> u) {
    const std::size_t n = u.size();
    // e[m] = elementary symmetric function of degree m.
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(u[k] >= 0.0))
            throw std::invalid_argument("l_eval_expanded: entries must be nonnegative");
        for (std::size_t m = std::min(k + 1, n); m >= 1; --m)
            e[m] += u[k] * e[m - 1];
    }
    double out = -1.0;
    for (std::size_t m = 1; m <= n; ++m)
        out += static_cast<double>(2 * m - 1) * e[m];
    return out;
}

UVector gamma_curve(const Weights& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("gamma_curve: tau must be positive");
    std::vector<double> u(p.rank());
    for (std::size_t i = 0; i < p.rank(); ++i) {
        double x = tau / p[i];
        // (sqrt(x^2+4) - x)/2 written to avoid cancellation for large x.
        u[i] = 2.0 / (std::sqrt(x * x + 4.0) + x);
    }
    return UVector(std::move(u));
}

LambdaGammaPoint lambda_along_gamma(const Weights& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("lambda_along_gamma: tau must be positive");
    const double n = static_cast<double>(p.rank());
    double value = 1.0 + (n - 1.0) * tau;
    double deriv = n - 1.0;
    for (std::size_t i = 0; i < p.rank(); ++i) {
        double root = std::hypot(tau, 2.0 * p[i]);
        value -= root;
        deriv -= tau / root;
    }
    return {value, deriv};
}

} // namespace cogrowth
