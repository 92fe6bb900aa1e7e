#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cogrowth/freegroup.hpp"

namespace cogrowth {

// Folded core graph of a finitely generated subgroup of F_n: a connected
// labeled graph with a base vertex, at most one edge per label and
// direction at each vertex, and no degree-1 vertices except possibly the
// base. Base-point loops read exactly the elements of the subgroup.
//
// Vertices are numbered in canonical BFS order from the base (edge slots
// ordered +1, -1, +2, -2, ...), so equal subgroups produce equal graphs.
class CoreGraph {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::size_t rank() const { return rank_; }
    std::size_t vertex_count() const { return adjacency_.size() / (2 * rank_); }
    std::size_t base() const { return 0; }

    // Target of the edge labeled l out of v, or npos.
    std::size_t neighbor(std::size_t v, Letter l) const {
        return adjacency_[v * 2 * rank_ + slot(l)];
    }
    std::size_t degree(std::size_t v) const;
    std::size_t missing_half_edges() const;
    bool complete() const;  // every vertex carries all 2n half-edges

    bool operator==(const CoreGraph&) const = default;

    // slot encoding: generator i occupies slots 2i (positive) and 2i+1 (negative)
    std::size_t slot(Letter l) const {
        return 2 * generator_index(l) + (l > 0 ? 0 : 1);
    }
    static Letter slot_letter(std::size_t slot) {
        Letter l = static_cast<Letter>(slot / 2 + 1);
        return slot % 2 ? -l : l;
    }

private:
    CoreGraph(std::size_t rank, std::vector<std::size_t> adjacency)
        : rank_(rank), adjacency_(std::move(adjacency)) {}

    std::size_t rank_;
    std::vector<std::size_t> adjacency_;  // vertex-major, 2n slots per vertex

    friend CoreGraph fold(std::size_t, std::span<const ReducedWord>);
};

// Stallings folding of the wedge of generator loops, followed by trimming
// of dangling trees and canonical relabeling. Trivial generators are
// discarded; an empty effective generating set yields the one-vertex graph.
CoreGraph fold(std::size_t rank, std::span<const ReducedWord> generators);
CoreGraph fold(std::size_t rank, std::initializer_list<const char*> words);

// True iff w labels a closed path at the base vertex.
bool member(const CoreGraph& core, const ReducedWord& w);

// Vertex count when the core is 2n-regular (finite index), nullopt otherwise.
std::optional<std::size_t> subgroup_index(const CoreGraph& core);

// Core graph with a label-consistent (2n-1)-branching tree of the given
// depth attached at every missing half-edge. Vertices 0..core_size-1 are
// the core; boundary lists the depth-L leaves.
struct TruncatedQuotient {
    std::size_t rank = 0;
    std::size_t core_size = 0;
    std::size_t depth = 0;
    std::size_t missing_half_edges = 0;
    std::vector<std::uint32_t> adjacency;  // 2n slots per vertex, UINT32_MAX when absent
    std::vector<std::uint32_t> boundary;

    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    std::size_t vertex_count() const { return adjacency.size() / (2 * rank); }
    std::uint32_t neighbor(std::size_t v, std::size_t slot) const {
        return adjacency[v * 2 * rank + slot];
    }
};

TruncatedQuotient truncate_quotient(const CoreGraph& core, std::size_t depth,
                                    std::size_t vertex_cap = kDefaultBallCap);

// Core graph of the subgroup generated by all conjugates w g w^{-1} of the
// given generators by reduced words w of length at most conjugacy_depth.
CoreGraph normal_closure_exhaustion(std::size_t rank, std::span<const ReducedWord> generators,
                                    std::size_t conjugacy_depth,
                                    std::size_t letter_cap = kDefaultBallCap);

// Subgroup description used by the JSON interface and the CLI.
struct SubgroupSpec {
    std::size_t rank = 2;
    std::vector<std::string> generators;
    bool normal_closure = false;
    std::size_t conjugacy_depth = 0;
    std::string key;  // optional identifier used in reports

    CoreGraph build(std::size_t letter_cap = kDefaultBallCap) const;
};

} // namespace cogrowth
