#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cogrowth/params.hpp"

namespace cogrowth {

// Letter encoding: +k is generator a_k, -k its inverse, k in 1..rank.
// Word syntax for parsing: lowercase a..z are generators, uppercase are
// inverses, so "abAB" is the commutator a b a^-1 b^-1.
using Letter = int;

inline Letter inverse_letter(Letter l) { return -l; }
inline std::size_t generator_index(Letter l) {
    return static_cast<std::size_t>(l > 0 ? l : -l) - 1;
}

class ReducedWord {
public:
    ReducedWord() = default;

    // Free reduction: cancels adjacent inverse pairs until none remain.
    static ReducedWord reduce(std::span<const Letter> letters);

    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter last() const { return letters_.back(); }
    const std::vector<Letter>& letters() const { return letters_; }

    ReducedWord append(Letter l) const;  // reduced product w * a_l
    ReducedWord concat(const ReducedWord& other) const;
    ReducedWord inverse() const;

    bool operator==(const ReducedWord&) const = default;

private:
    std::vector<Letter> letters_;
};

struct WordHash {
    std::size_t operator()(const ReducedWord& w) const;
};

ReducedWord parse_word(std::string_view text, std::size_t rank);
std::string format_word(const ReducedWord& w);

inline constexpr std::size_t kDefaultBallCap = 10'000'000;

struct BallEntry {
    ReducedWord word;
    double distance;
};

// All reduced words within d_r-distance radius of the identity, in a
// deterministic depth-first order (letters ordered by generator index,
// positive before negative).
class Ball {
public:
    static Ball enumerate(const EdgeLengths& lengths, double radius,
                          std::size_t cap = kDefaultBallCap);

    std::size_t size() const { return entries_.size(); }
    const std::vector<BallEntry>& entries() const { return entries_; }
    const EdgeLengths& lengths() const { return lengths_; }
    double radius() const { return radius_; }
    std::size_t rank() const { return lengths_.rank(); }

    std::optional<std::size_t> find(const ReducedWord& w) const;

private:
    Ball(EdgeLengths lengths, double radius) : lengths_(std::move(lengths)), radius_(radius) {}

    EdgeLengths lengths_;
    double radius_;
    std::vector<BallEntry> entries_;
    std::unordered_map<ReducedWord, std::size_t, WordHash> index_;
};

// Number of reduced words with d_r <= radius, by counting over letter
// multisets rather than listing words. Supports rank <= 8.
std::uint64_t ball_count(const EdgeLengths& lengths, double radius);

// A boundary point of the tree, described as prefix . period^infinity,
// with the concatenation required to stay reduced.
class BoundaryRay {
public:
    BoundaryRay(ReducedWord prefix, ReducedWord period);

    Letter letter_at(std::size_t position) const;
    const ReducedWord& prefix() const { return prefix_; }
    const ReducedWord& period() const { return period_; }

private:
    ReducedWord prefix_;
    ReducedWord period_;
};

// h(x) = j(x, xi)^s restricted to a ball: h(id) = 1, and one edge step
// along generator i multiplies the value by r_i^{-s} when the step moves
// toward xi and by r_i^{s} otherwise. This is the convention under which
// (Delta_p h)/h reproduces c_i; the literal Busemann normalization with
// b_xi(x) = lim(t - d(x, beta(t))) has the opposite sign.
struct HorofunctionField {
    BoundaryRay center;
    double exponent;
    Ball support;
    std::vector<double> values;  // aligned with support.entries()

    double value_at(const ReducedWord& w) const;
};

HorofunctionField horofunction(const BoundaryRay& xi, double s, const EdgeLengths& lengths,
                               double radius, std::size_t cap = kDefaultBallCap);

struct LaplacianValues {
    std::vector<std::size_t> interior;  // ball indices with all 2n neighbors present
    std::vector<double> values;         // (Delta_p f) at those indices
};

// (Delta_p f)(x) = f(x) - sum_i p_i (f(x a_i) + f(x a_i^-1)) on every
// vertex of the ball whose full neighborhood lies in the ball.
LaplacianValues apply_laplacian(const Weights& p, const Ball& ball, std::span<const double> f);

// Same at a single vertex; throws std::out_of_range if a neighbor is
// missing from the ball.
double laplacian_at(const Weights& p, const Ball& ball, std::span<const double> f,
                    std::size_t index);

} // namespace cogrowth
