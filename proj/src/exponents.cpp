#include "cogrowth/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cogrowth/errors.hpp"

namespace cogrowth {

const char* to_string(ExponentMethod m) {
    switch (m) {
        case ExponentMethod::root_solve: return "root-solve";
        case ExponentMethod::transfer_matrix: return "transfer-matrix";
        case ExponentMethod::brute_force: return "brute-force";
    }
    return "?";
}

ExponentResult delta_free(const EdgeLengths& r) {
    auto f = [&](double s) { return l_eval(h_map(r, s).values()); };
    double lo = 1e-9, hi = 1.0;
    if (f(lo) <= 0.0) throw ConsistencyError("delta_free: no sign change near 0");
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 64.0) throw ConsistencyError("delta_free: root not bracketed");
    }
    for (int it = 0; it < 120 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    ExponentResult out;
    out.value = 0.5 * (lo + hi);
    out.method = ExponentMethod::root_solve;
    out.residual = std::abs(f(out.value));
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

namespace {

// Directed-edge representation of a core graph for non-backtracking walks.
struct EdgeSystem {
    struct Edge {
        std::uint32_t target;      // head vertex
        std::uint32_t label;       // generator index of the letter
        std::uint32_t reverse;     // edge id of the reverse half-edge
    };
    std::vector<Edge> edges;
    std::vector<std::uint32_t> first_out;  // per vertex, CSR into out_edges
    std::vector<std::uint32_t> out_edges;  // edge ids grouped by source vertex

    explicit EdgeSystem(const CoreGraph& core) {
        const std::size_t n = core.rank();
        const std::size_t V = core.vertex_count();
        std::vector<std::vector<std::uint32_t>> outs(V);
        std::unordered_map<std::uint64_t, std::uint32_t> ids;
        for (std::size_t v = 0; v < V; ++v)
            for (std::size_t s = 0; s < 2 * n; ++s) {
                Letter l = CoreGraph::slot_letter(s);
                std::size_t w = core.neighbor(v, l);
                if (w == CoreGraph::npos) continue;
                std::uint32_t id = static_cast<std::uint32_t>(edges.size());
                ids.emplace((static_cast<std::uint64_t>(v) << 8) | s, id);
                edges.push_back({static_cast<std::uint32_t>(w),
                                 static_cast<std::uint32_t>(generator_index(l)), 0});
                outs[v].push_back(id);
            }
        for (std::size_t v = 0; v < V; ++v)
            for (std::size_t s = 0; s < 2 * n; ++s) {
                Letter l = CoreGraph::slot_letter(s);
                std::size_t w = core.neighbor(v, l);
                if (w == CoreGraph::npos) continue;
                std::uint32_t id = ids.at((static_cast<std::uint64_t>(v) << 8) | s);
                std::size_t rs = core.slot(-l);
                edges[id].reverse = ids.at((static_cast<std::uint64_t>(w) << 8) | rs);
            }
        first_out.assign(V + 1, 0);
        for (std::size_t v = 0; v < V; ++v)
            first_out[v + 1] = first_out[v] + static_cast<std::uint32_t>(outs[v].size());
        out_edges.reserve(edges.size());
        for (auto& o : outs)
            for (std::uint32_t id : o) out_edges.push_back(id);
    }
};

// Power iteration for the Perron root of B(s); iterates B(s) + I so that
// periodic structure (pure cycles) cannot stall the ratio.
double perron_root(const EdgeSystem& sys, const std::vector<double>& weight) {
    const std::size_t E = sys.edges.size();
    std::vector<double> x(E, 1.0), y(E);
    double ratio = 0.0;
    int stable = 0;
    for (int it = 0; it < 100000; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t e = 0; e < E; ++e) {
            if (x[e] == 0.0) continue;
            const auto& ed = sys.edges[e];
            for (std::uint32_t k = sys.first_out[ed.target]; k < sys.first_out[ed.target + 1];
                 ++k) {
                std::uint32_t f = sys.out_edges[k];
                if (f == ed.reverse) continue;
                y[f] += x[e] * weight[sys.edges[f].label];
            }
        }
        double sx = 0.0, sy = 0.0;
        for (std::size_t e = 0; e < E; ++e) {
            y[e] += x[e];  // +I shift
            sx += x[e];
            sy += y[e];
        }
        double next = sy / sx;
        if (std::abs(next - ratio) < 1e-13 * std::max(1.0, std::abs(next))) {
            if (++stable >= 4) return next - 1.0;
        } else {
            stable = 0;
        }
        ratio = next;
        double norm = 0.0;
        for (double v : y) norm += v;
        for (std::size_t e = 0; e < E; ++e) x[e] = y[e] / norm;
    }
    return ratio - 1.0;
}

} // namespace

double transfer_spectral_radius(const CoreGraph& core, const EdgeLengths& r, double s) {
    EdgeSystem sys(core);
    if (sys.edges.empty()) return 0.0;
    std::vector<double> weight(r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i) weight[i] = std::pow(r[i], s);
    return perron_root(sys, weight);
}

ExponentResult delta_subgroup(const CoreGraph& core, const EdgeLengths& r) {
    if (core.rank() != r.rank())
        throw std::invalid_argument("delta_subgroup: rank mismatch");
    ExponentResult out;
    out.method = ExponentMethod::transfer_matrix;

    EdgeSystem sys(core);
    if (sys.edges.empty()) {
        out.flags = "empty-core";
        return out;
    }
    auto rho = [&](double s) { return transfer_spectral_radius(core, r, s); };
    double rho0 = rho(0.0);
    if (rho0 <= 1.0 + 1e-9) {
        // Polynomial orbit growth: the limsup definition gives exponent 0.
        out.flags = "polynomial-growth";
        out.residual = std::abs(std::min(rho0, 1.0) - 1.0);
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (rho(hi) > 1.0) {
        hi *= 2.0;
        if (hi > 64.0) throw ConsistencyError("delta_subgroup: root not bracketed");
    }
    for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (rho(mid) > 1.0 ? lo : hi) = mid;
    }
    out.value = 0.5 * (lo + hi);
    out.residual = std::abs(rho(out.value) - 1.0);
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

std::uint64_t count_loops(const CoreGraph& core, const EdgeLengths& r, double radius,
                          std::uint64_t count_cap) {
    const std::size_t n = core.rank();
    if (n > 8) throw std::invalid_argument("count_loops: rank must be at most 8");
    if (!(radius >= 0.0)) throw std::invalid_argument("count_loops: radius must be nonnegative");

    EdgeSystem sys(core);
    const std::size_t E = sys.edges.size();
    const std::size_t states = E + 1;  // directed edges plus the start state
    std::vector<double> len(n);
    for (std::size_t i = 0; i < n; ++i) len[i] = r.edge_length(i);
    const double limit = radius + 1e-9 * (1.0 + std::abs(radius));

    auto key_distance = [&](std::uint64_t key) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            d += static_cast<double>((key >> (8 * i)) & 0xff) * len[i];
        return d;
    };

    // counts per (letter multiset, walk state); words are loops when the
    // state's head vertex is the base.
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> level;
    level.emplace(0, std::vector<std::uint64_t>(states, 0));
    level[0][E] = 1;
    std::uint64_t loops = 1;  // identity

    while (!level.empty()) {
        std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> next;
        for (const auto& [key, counts] : level) {
            for (std::size_t st = 0; st < states; ++st) {
                std::uint64_t c = counts[st];
                if (c == 0) continue;
                std::uint32_t at = st == E ? static_cast<std::uint32_t>(core.base())
                                           : sys.edges[st].target;
                std::uint32_t rev = st == E ? std::uint32_t(-1) : sys.edges[st].reverse;
                for (std::uint32_t k = sys.first_out[at]; k < sys.first_out[at + 1]; ++k) {
                    std::uint32_t f = sys.out_edges[k];
                    if (f == rev) continue;
                    std::size_t lab = sys.edges[f].label;
                    std::uint64_t nk = key + (1ULL << (8 * lab));
                    if (((nk >> (8 * lab)) & 0xff) == 0)
                        throw ResourceCapExceeded("count_loops: word length exceeds 255");
                    if (key_distance(nk) > limit) continue;
                    auto& vec =
                        next.try_emplace(nk, std::vector<std::uint64_t>(states, 0)).first->second;
                    vec[f] += c;
                    if (sys.edges[f].target == core.base()) {
                        loops += c;
                        if (loops > count_cap)
                            throw ResourceCapExceeded("count_loops: count cap exceeded");
                    }
                }
            }
        }
        level = std::move(next);
    }
    return loops;
}

ExponentResult delta_bruteforce(const CoreGraph& core, const EdgeLengths& r, double radius,
                                std::uint64_t count_cap) {
    if (!(radius > 0.0)) throw std::invalid_argument("delta_bruteforce: radius must be positive");
    std::uint64_t count = count_loops(core, r, radius, count_cap);
    ExponentResult out;
    out.method = ExponentMethod::brute_force;
    out.value = std::log(static_cast<double>(count)) / radius;
    out.bracket_lo = out.bracket_hi = out.value;
    if (count == 1) out.flags = "trivial-count";
    return out;
}

} // namespace cogrowth
