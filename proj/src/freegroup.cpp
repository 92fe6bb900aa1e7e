#include "cogrowth/freegroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cogrowth/errors.hpp"

namespace cogrowth {

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
    ReducedWord w;
    w.letters_.reserve(letters.size());
    for (Letter l : letters) {
        if (l == 0) throw std::invalid_argument("ReducedWord: letter 0 is not valid");
        if (!w.letters_.empty() && w.letters_.back() == -l)
            w.letters_.pop_back();
        else
            w.letters_.push_back(l);
    }
    return w;
}

ReducedWord ReducedWord::append(Letter l) const {
    ReducedWord w(*this);
    if (!w.letters_.empty() && w.letters_.back() == -l)
        w.letters_.pop_back();
    else
        w.letters_.push_back(l);
    return w;
}

ReducedWord ReducedWord::concat(const ReducedWord& other) const {
    ReducedWord w(*this);
    for (Letter l : other.letters_) {
        if (!w.letters_.empty() && w.letters_.back() == -l)
            w.letters_.pop_back();
        else
            w.letters_.push_back(l);
    }
    return w;
}

ReducedWord ReducedWord::inverse() const {
    ReducedWord w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.letters_.push_back(-*it);
    return w;
}

std::size_t WordHash::operator()(const ReducedWord& w) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Letter l : w.letters()) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l));
        h *= 0x100000001b3ULL;
    }
    return h;
}

ReducedWord parse_word(std::string_view text, std::size_t rank) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    for (char ch : text) {
        Letter l;
        if (ch >= 'a' && ch <= 'z')
            l = ch - 'a' + 1;
        else if (ch >= 'A' && ch <= 'Z')
            l = -(ch - 'A' + 1);
        else
            throw std::invalid_argument(std::string("parse_word: bad character '") + ch + "'");
        if (generator_index(l) >= rank)
            throw std::invalid_argument(std::string("parse_word: letter '") + ch +
                                        "' exceeds rank");
        letters.push_back(l);
    }
    return ReducedWord::reduce(letters);
}

std::string format_word(const ReducedWord& w) {
    std::string out;
    out.reserve(w.length());
    for (Letter l : w.letters())
        out.push_back(l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1));
    return out;
}

namespace {

// Slack for the d_r <= radius comparison so that radii given as exact
// multiples of edge lengths include their boundary sphere.
double radius_slack(double radius) { return 1e-9 * (1.0 + std::abs(radius)); }

} // namespace

Ball Ball::enumerate(const EdgeLengths& lengths, double radius, std::size_t cap) {
    if (!(radius >= 0.0)) throw std::invalid_argument("Ball: radius must be nonnegative");
    const std::size_t n = lengths.rank();
    std::vector<double> len(n);
    for (std::size_t i = 0; i < n; ++i) len[i] = lengths.edge_length(i);
    const double limit = radius + radius_slack(radius);

    Ball ball(lengths, radius);
    // Depth-first over the tree; letters in order +1, -1, +2, -2, ...
    struct Frame {
        ReducedWord word;
        double dist;
    };
    std::vector<Frame> stack;
    stack.push_back({ReducedWord(), 0.0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (ball.entries_.size() >= cap)
            throw ResourceCapExceeded("Ball: element cap exceeded");
        ball.index_.emplace(f.word, ball.entries_.size());
        ball.entries_.push_back({f.word, f.dist});
        // Push children in reverse so they pop in canonical order.
        for (std::size_t i = n; i-- > 0;) {
            for (int sign = -1; sign <= 1; sign += 2) {
                Letter l = sign * static_cast<Letter>(i + 1);
                if (!f.word.empty() && f.word.last() == -l) continue;
                double d = f.dist + len[i];
                if (d <= limit) stack.push_back({f.word.append(l), d});
            }
        }
    }
    return ball;
}

std::optional<std::size_t> Ball::find(const ReducedWord& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t ball_count(const EdgeLengths& lengths, double radius) {
    const std::size_t n = lengths.rank();
    if (n > 8) throw std::invalid_argument("ball_count: rank must be at most 8");
    if (!(radius >= 0.0)) throw std::invalid_argument("ball_count: radius must be nonnegative");
    std::vector<double> len(n);
    for (std::size_t i = 0; i < n; ++i) len[i] = lengths.edge_length(i);
    const double limit = radius + radius_slack(radius);

    // Words are aggregated by their letter-count multiset (one byte per
    // generator, packed into a key) and the last letter; the distance only
    // depends on the multiset.
    const std::size_t states = 2 * n + 1;  // last letter, or "empty" at slot 2n
    auto key_distance = [&](std::uint64_t key) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            d += static_cast<double>((key >> (8 * i)) & 0xff) * len[i];
        return d;
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> level;
    level.emplace(0, std::vector<std::uint64_t>(states, 0));
    level[0][2 * n] = 1;
    std::uint64_t total = 1;  // identity

    constexpr std::uint64_t kCountCap = 1'000'000'000'000'000'000ULL;
    while (!level.empty()) {
        std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> next;
        for (const auto& [key, counts] : level) {
            for (std::size_t st = 0; st < states; ++st) {
                std::uint64_t c = counts[st];
                if (c == 0) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    std::uint64_t nk = key + (1ULL << (8 * i));
                    if (((nk >> (8 * i)) & 0xff) == 0)
                        throw ResourceCapExceeded("ball_count: word length exceeds 255 letters");
                    if (key_distance(nk) > limit) continue;
                    for (int sign = 0; sign < 2; ++sign) {
                        std::size_t ns = 2 * i + static_cast<std::size_t>(sign);
                        // states 2i and 2i+1 carry mutually inverse letters
                        if (st != 2 * n && (st ^ 1u) == ns) continue;
                        auto& vec = next.try_emplace(nk, std::vector<std::uint64_t>(states, 0)).first->second;
                        vec[ns] += c;
                        total += c;
                        if (total > kCountCap)
                            throw ResourceCapExceeded("ball_count: count cap exceeded");
                    }
                }
            }
        }
        level = std::move(next);
    }
    return total;
}

BoundaryRay::BoundaryRay(ReducedWord prefix, ReducedWord period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty())
        throw std::invalid_argument("BoundaryRay: period must be nonempty");
    if (!prefix_.empty() && prefix_.last() == -period_[0])
        throw std::invalid_argument("BoundaryRay: prefix.period is not reduced");
    if (period_.last() == -period_[0])
        throw std::invalid_argument("BoundaryRay: period.period is not reduced");
}

Letter BoundaryRay::letter_at(std::size_t position) const {
    if (position < prefix_.length()) return prefix_[position];
    return period_[(position - prefix_.length()) % period_.length()];
}

double HorofunctionField::value_at(const ReducedWord& w) const {
    auto idx = support.find(w);
    if (!idx) throw std::out_of_range("HorofunctionField: word outside the support ball");
    return values[*idx];
}

HorofunctionField horofunction(const BoundaryRay& xi, double s, const EdgeLengths& lengths,
                               double radius, std::size_t cap) {
    if (!(s > 0.0)) throw std::invalid_argument("horofunction: s must be positive");
    Ball ball = Ball::enumerate(lengths, radius, cap);
    const std::size_t n = lengths.rank();
    std::vector<double> u(n), uinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::pow(lengths[i], s);
        uinv[i] = 1.0 / u[i];
    }
    std::vector<double> values(ball.size());
    for (std::size_t e = 0; e < ball.size(); ++e) {
        const ReducedWord& w = ball.entries()[e].word;
        // The first steps shared with the ray move toward xi, the rest away.
        std::size_t shared = 0;
        while (shared < w.length() && w[shared] == xi.letter_at(shared)) ++shared;
        double v = 1.0;
        for (std::size_t k = 0; k < w.length(); ++k)
            v *= (k < shared) ? uinv[generator_index(w[k])] : u[generator_index(w[k])];
        values[e] = v;
    }
    return HorofunctionField{xi, s, std::move(ball), std::move(values)};
}

double laplacian_at(const Weights& p, const Ball& ball, std::span<const double> f,
                    std::size_t index) {
    if (f.size() != ball.size())
        throw std::invalid_argument("laplacian_at: value vector does not match the ball");
    const ReducedWord& w = ball.entries()[index].word;
    double acc = f[index];
    for (std::size_t i = 0; i < ball.rank(); ++i) {
        Letter l = static_cast<Letter>(i + 1);
        auto fwd = ball.find(w.append(l));
        auto bwd = ball.find(w.append(-l));
        if (!fwd || !bwd)
            throw std::out_of_range("laplacian_at: neighbor value missing from the ball");
        acc -= p[i] * (f[*fwd] + f[*bwd]);
    }
    return acc;
}

LaplacianValues apply_laplacian(const Weights& p, const Ball& ball, std::span<const double> f) {
    if (f.size() != ball.size())
        throw std::invalid_argument("apply_laplacian: value vector does not match the ball");
    if (p.rank() != ball.rank())
        throw std::invalid_argument("apply_laplacian: weight rank does not match the ball");
    LaplacianValues out;
    for (std::size_t e = 0; e < ball.size(); ++e) {
        const ReducedWord& w = ball.entries()[e].word;
        double acc = f[e];
        bool interior = true;
        for (std::size_t i = 0; i < ball.rank() && interior; ++i) {
            Letter l = static_cast<Letter>(i + 1);
            auto fwd = ball.find(w.append(l));
            auto bwd = ball.find(w.append(-l));
            if (!fwd || !bwd) {
                interior = false;
                break;
            }
            acc -= p[i] * (f[*fwd] + f[*bwd]);
        }
        if (interior) {
            out.interior.push_back(e);
            out.values.push_back(acc);
        }
    }
    return out;
}

} // namespace cogrowth
