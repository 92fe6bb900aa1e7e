#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cogrowth {

// Edge-length parameter r = (r_1,...,r_n): r_i > 0, r_1 + ... + r_n = 1/2.
// The edge of generator a_i (and its inverse) gets length -log r_i.
class EdgeLengths {
public:
    explicit EdgeLengths(std::vector<double> values);
    static EdgeLengths uniform(std::size_t rank);

    std::size_t rank() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    double edge_length(std::size_t i) const;  // -log r_i
    double min_edge_length() const;

private:
    std::vector<double> values_;
};

// Laplacian weight p = (p_1,...,p_n): p_i > 0, p_1 + ... + p_n = 1/2.
// The step probability on each a_i^{+1} and a_i^{-1} edge is p_i.
class Weights {
public:
    explicit Weights(std::vector<double> values);
    static Weights uniform(std::size_t rank);

    std::size_t rank() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    bool is_uniform(double tol = 1e-14) const;

private:
    std::vector<double> values_;
};

// Transformed coordinates u_i = r_i^s, componentwise in (0,1).
class UVector {
public:
    explicit UVector(std::vector<double> values);

    std::size_t rank() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

// Outcome of solving c_1(u,p) = ... = c_n(u,p), sum p = 1/2 for (p, lambda).
// When some u_j = 1 the solution degenerates to p_j = 1/2, p_i = 0 (i != j),
// lambda = 0; that lies on the boundary of the weight simplex and is flagged.
struct AlgebraicSolution {
    std::vector<double> weight_values;
    double lambda = 0.0;
    double determinant = 0.0;
    bool boundary = false;
    std::size_t boundary_index = 0;

    bool in_simplex() const;
    Weights weights() const;  // throws std::domain_error when boundary
};

// u_i = r_i^s for s > 0.
UVector h_map(const EdgeLengths& r, double s);

// Inverse of h_map: the unique (r, s) with r_i^s = u_i and sum r_i = 1/2.
// Solves sum u_i^{1/s} = 1/2 (strictly increasing in s) by bisection with
// a Newton polish.
std::pair<EdgeLengths, double> h_inverse(const UVector& u);

// c_i(u, p) = 1 - 2 sum_k u_k p_k - (1/u_i - u_i) p_i, index 0-based.
double c_eval(std::span<const double> u, std::span<const double> p, std::size_t i);
double c_eval(const UVector& u, const Weights& p, std::size_t i);

// Solves the linear system c_1 = ... = c_n, sum p = 1/2 for the given u.
// Accepts u componentwise > 0 with at most one u_j = 1 (evaluation for
// u_i > 1 is supported; the result then has lambda < 0 when all u_i > 1).
// Throws DegenerateDeterminant when D(u) vanishes.
AlgebraicSolution solve_weights(std::span<const double> u);
AlgebraicSolution solve_weights(const UVector& u);

// l(u) = 2 sum_j u_j prod_{k!=j}(1+u_k) - prod_l(1+u_l), product form.
double l_eval(std::span<const double> u);

// Same polynomial evaluated through its expansion
// -1 + e_1 + 3 e_2 + 5 e_3 + ... + (2n-1) e_n in the elementary symmetric
// functions e_m of u. Independent route used to cross-check l_eval.
double l_eval_expanded(std::span<const double> u);

// The point of the constraint curve {u : p(u) = p} at parameter tau > 0:
// u_i = (sqrt(tau^2/p_i^2 + 4) - tau/p_i)/2, each in (0,1).
UVector gamma_curve(const Weights& p, double tau);

struct LambdaGammaPoint {
    double value;
    double derivative;
};

// Value and derivative of lambda along the constraint curve:
//   value      = 1 - sum_i sqrt(tau^2 + 4 p_i^2) + (n-1) tau
//   derivative = -sum_i tau / sqrt(tau^2 + 4 p_i^2) + (n-1)
LambdaGammaPoint lambda_along_gamma(const Weights& p, double tau);

} // namespace cogrowth
