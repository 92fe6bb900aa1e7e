#include "cogrowth/subgroups.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>

#include "cogrowth/errors.hpp"

namespace cogrowth {

namespace {

constexpr std::size_t kNone = CoreGraph::npos;

struct FoldArena {
    std::size_t rank;
    std::size_t slots;
    std::vector<std::size_t> parent;
    std::vector<std::size_t> adj;  // per vertex, 2n slots; entries may be stale

    explicit FoldArena(std::size_t rank_) : rank(rank_), slots(2 * rank_) {}

    std::size_t new_vertex() {
        parent.push_back(parent.size());
        adj.resize(adj.size() + slots, kNone);
        return parent.size() - 1;
    }

    std::size_t find(std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    std::size_t& at(std::size_t v, std::size_t slot) { return adj[v * slots + slot]; }

    std::size_t slot_of(Letter l) const {
        return 2 * generator_index(l) + (l > 0 ? 0 : 1);
    }

    // Records the half-edge pair u --l--> v; folding happens later.
    void add_edge(std::size_t u, Letter l, std::size_t v) {
        merge_slot(u, slot_of(l), v);
        merge_slot(v, slot_of(-l), u);
        drain();
    }

    std::deque<std::pair<std::size_t, std::size_t>> pending;

    void merge_slot(std::size_t u, std::size_t slot, std::size_t target) {
        u = find(u);
        std::size_t& cell = at(u, slot);
        if (cell == kNone) {
            cell = target;
        } else if (find(cell) != find(target)) {
            pending.emplace_back(find(cell), find(target));
        }
    }

    void drain() {
        while (!pending.empty()) {
            auto [a, b] = pending.front();
            pending.pop_front();
            a = find(a);
            b = find(b);
            if (a == b) continue;
            if (a > b) std::swap(a, b);  // keep the smaller id (base stays 0)
            parent[b] = a;
            for (std::size_t s = 0; s < slots; ++s) {
                std::size_t t = at(b, s);
                if (t == kNone) continue;
                std::size_t& cell = at(a, s);
                if (cell == kNone)
                    cell = t;
                else if (find(cell) != find(t))
                    pending.emplace_back(find(cell), find(t));
            }
        }
    }
};

std::vector<std::size_t> folded_adjacency(FoldArena& arena) {
    arena.drain();
    const std::size_t slots = arena.slots;

    // Trim dangling trees: repeatedly drop non-base vertices of degree <= 1.
    std::vector<std::size_t> roots;
    for (std::size_t v = 0; v < arena.parent.size(); ++v)
        if (arena.find(v) == v) roots.push_back(v);
    std::vector<char> alive(arena.parent.size(), 0);
    for (std::size_t v : roots) alive[v] = 1;
    const std::size_t base = arena.find(0);

    auto degree = [&](std::size_t v) {
        std::size_t d = 0;
        for (std::size_t s = 0; s < slots; ++s) {
            std::size_t t = arena.at(v, s);
            if (t != kNone && alive[arena.find(t)]) ++d;
        }
        return d;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t v : roots) {
            if (!alive[v] || v == base) continue;
            if (degree(v) <= 1) {
                alive[v] = 0;
                changed = true;
            }
        }
    }

    // Canonical BFS relabeling from the base.
    std::vector<std::size_t> order;
    std::vector<std::size_t> label(arena.parent.size(), kNone);
    order.push_back(base);
    label[base] = 0;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        std::size_t v = order[qi];
        for (std::size_t s = 0; s < slots; ++s) {
            std::size_t t = arena.at(v, s);
            if (t == kNone) continue;
            t = arena.find(t);
            if (!alive[t] || label[t] != kNone) continue;
            label[t] = order.size();
            order.push_back(t);
        }
    }

    std::vector<std::size_t> adjacency(order.size() * slots, kNone);
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        std::size_t v = order[idx];
        for (std::size_t s = 0; s < slots; ++s) {
            std::size_t t = arena.at(v, s);
            if (t == kNone) continue;
            t = arena.find(t);
            if (alive[t]) adjacency[idx * slots + s] = label[t];
        }
    }
    return adjacency;
}

} // namespace

std::size_t CoreGraph::degree(std::size_t v) const {
    std::size_t d = 0;
    for (std::size_t s = 0; s < 2 * rank_; ++s)
        if (adjacency_[v * 2 * rank_ + s] != npos) ++d;
    return d;
}

std::size_t CoreGraph::missing_half_edges() const {
    std::size_t m = 0;
    for (std::size_t x : adjacency_)
        if (x == npos) ++m;
    return m;
}

bool CoreGraph::complete() const { return missing_half_edges() == 0; }

CoreGraph fold(std::size_t rank, std::span<const ReducedWord> generators) {
    if (rank < 2) throw std::invalid_argument("fold: rank must be at least 2");
    FoldArena arena(rank);
    arena.new_vertex();  // base
    for (const ReducedWord& g : generators) {
        if (g.empty()) continue;
        for (Letter l : g.letters())
            if (generator_index(l) >= rank)
                throw std::invalid_argument("fold: generator letter exceeds rank");
        std::size_t cur = arena.find(0);
        for (std::size_t i = 0; i + 1 < g.length(); ++i) {
            std::size_t nxt = arena.new_vertex();
            arena.add_edge(cur, g[i], nxt);
            cur = arena.find(nxt);
        }
        arena.add_edge(cur, g.last(), arena.find(0));
    }
    return CoreGraph(rank, folded_adjacency(arena));
}

CoreGraph fold(std::size_t rank, std::initializer_list<const char*> words) {
    std::vector<ReducedWord> gens;
    gens.reserve(words.size());
    for (const char* w : words) gens.push_back(parse_word(w, rank));
    return fold(rank, gens);
}

bool member(const CoreGraph& core, const ReducedWord& w) {
    std::size_t cur = core.base();
    for (Letter l : w.letters()) {
        if (generator_index(l) >= core.rank()) return false;
        cur = core.neighbor(cur, l);
        if (cur == CoreGraph::npos) return false;
    }
    return cur == core.base();
}

std::optional<std::size_t> subgroup_index(const CoreGraph& core) {
    if (!core.complete()) return std::nullopt;
    return core.vertex_count();
}

TruncatedQuotient truncate_quotient(const CoreGraph& core, std::size_t depth,
                                    std::size_t vertex_cap) {
    const std::size_t n = core.rank();
    const std::size_t slots = 2 * n;
    TruncatedQuotient tq;
    tq.rank = n;
    tq.core_size = core.vertex_count();
    tq.depth = depth;
    tq.missing_half_edges = core.missing_half_edges();

    tq.adjacency.assign(tq.core_size * slots, TruncatedQuotient::none);
    for (std::size_t v = 0; v < tq.core_size; ++v)
        for (std::size_t s = 0; s < slots; ++s) {
            std::size_t t = core.neighbor(v, CoreGraph::slot_letter(s));
            if (t != CoreGraph::npos)
                tq.adjacency[v * slots + s] = static_cast<std::uint32_t>(t);
        }
    if (depth == 0 || tq.missing_half_edges == 0) return tq;

    auto add_vertex = [&]() {
        if (tq.vertex_count() >= vertex_cap)
            throw ResourceCapExceeded("truncate_quotient: vertex cap exceeded");
        tq.adjacency.resize(tq.adjacency.size() + slots, TruncatedQuotient::none);
        return static_cast<std::uint32_t>(tq.vertex_count() - 1);
    };

    // frontier entries: (vertex, slot of the edge back to its parent)
    std::vector<std::pair<std::uint32_t, std::size_t>> frontier;
    for (std::size_t v = 0; v < tq.core_size; ++v)
        for (std::size_t s = 0; s < slots; ++s)
            if (tq.adjacency[v * slots + s] == TruncatedQuotient::none) {
                std::uint32_t w = add_vertex();
                tq.adjacency[v * slots + s] = w;
                tq.adjacency[w * slots + (s ^ 1)] = static_cast<std::uint32_t>(v);
                frontier.emplace_back(w, s ^ 1);
            }
    for (std::size_t d = 2; d <= depth; ++d) {
        std::vector<std::pair<std::uint32_t, std::size_t>> next;
        next.reserve(frontier.size() * (slots - 1));
        for (auto [v, back] : frontier)
            for (std::size_t s = 0; s < slots; ++s) {
                if (s == back) continue;
                std::uint32_t w = add_vertex();
                tq.adjacency[v * slots + s] = w;
                tq.adjacency[w * slots + (s ^ 1)] = v;
                next.emplace_back(w, s ^ 1);
            }
        frontier = std::move(next);
    }
    tq.boundary.reserve(frontier.size());
    for (auto [v, back] : frontier) tq.boundary.push_back(v);
    return tq;
}

CoreGraph normal_closure_exhaustion(std::size_t rank, std::span<const ReducedWord> generators,
                                    std::size_t conjugacy_depth, std::size_t letter_cap) {
    std::vector<ReducedWord> conjugates;
    std::size_t letters = 0;

    // All reduced conjugators up to the requested length, in canonical order.
    std::vector<ReducedWord> frontier{ReducedWord()};
    for (std::size_t len = 0; len <= conjugacy_depth; ++len) {
        for (const ReducedWord& w : frontier) {
            ReducedWord winv = w.inverse();
            for (const ReducedWord& g : generators) {
                ReducedWord c = w.concat(g).concat(winv);
                letters += c.length();
                if (letters > letter_cap)
                    throw ResourceCapExceeded("normal_closure_exhaustion: letter cap exceeded");
                conjugates.push_back(std::move(c));
            }
        }
        if (len == conjugacy_depth) break;
        std::vector<ReducedWord> next;
        next.reserve(frontier.size() * 2 * rank);
        for (const ReducedWord& w : frontier)
            for (std::size_t i = 0; i < rank; ++i)
                for (int sign = -1; sign <= 1; sign += 2) {
                    Letter l = sign * static_cast<Letter>(i + 1);
                    if (!w.empty() && w.last() == -l) continue;
                    next.push_back(w.append(l));
                }
        frontier = std::move(next);
    }
    return fold(rank, conjugates);
}

CoreGraph SubgroupSpec::build(std::size_t letter_cap) const {
    std::vector<ReducedWord> gens;
    gens.reserve(generators.size());
    for (const std::string& g : generators) gens.push_back(parse_word(g, rank));
    if (normal_closure)
        return normal_closure_exhaustion(rank, gens, conjugacy_depth, letter_cap);
    return fold(rank, gens);
}

} // namespace cogrowth
