#include "stepup/hypergraph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stepup/combinatorics.hpp"

namespace stepup {

namespace {

std::string show(std::span<const Vertex> vs) {
    std::ostringstream os;
    os << '<';
    for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
    os << '>';
    return os.str();
}

void require_in_graph(const StepUpHypergraph& h, std::span<const Vertex> vs) {
    for (auto v : vs)
        if (!h.contains(v))
            throw Error(ErrorCode::MalformedTuple,
                        "vertex " + std::to_string(v) + " outside {0..2^" + std::to_string(h.bits()) + "-1}");
}

} // namespace

EdgeRule rule_slot(unsigned d1, unsigned d2, unsigned d3) {
    if (d1 == d2 || d2 == d3) throw std::logic_error("equal consecutive deltas cannot occur");
    if (d1 < d2 && d2 < d3) return EdgeRule::RuleI;
    if (d1 > d2 && d2 > d3) return EdgeRule::RuleI;
    if (d1 < d2) return EdgeRule::None; // d1 < d2 > d3
    if (d1 == d3) throw std::logic_error("valley pattern with d1 == d3 cannot occur");
    return d1 > d3 ? EdgeRule::RuleII : EdgeRule::RuleIII;
}

EdgeClass classify_deltas(const PairColoring& phi, unsigned d1, unsigned d2, unsigned d3) {
    const EdgeRule rule = rule_slot(d1, d2, d3);
    const bool c12 = phi.blue(d1, d2), c23 = phi.blue(d2, d3), c13 = phi.blue(d1, d3);
    switch (rule) {
    case EdgeRule::RuleI: return {rule, c12 == c23 && c23 != c13};
    case EdgeRule::RuleII: return {rule, c12 == c13 && c13 != c23};
    case EdgeRule::RuleIII: return {rule, c12 == c13 && c13 == c23};
    case EdgeRule::None: break;
    }
    return {EdgeRule::None, false};
}

EdgeClass classify_4tuple(const StepUpHypergraph& h, std::span<const Vertex, 4> e) {
    require_ordered(e, 4);
    require_in_graph(h, e);
    return classify_deltas(h.coloring(), delta_unchecked(e[0], e[1]), delta_unchecked(e[1], e[2]),
                           delta_unchecked(e[2], e[3]));
}

Edge describe_4set(const StepUpHypergraph& h, std::span<const Vertex, 4> e) {
    std::array<Vertex, 4> s{e[0], e[1], e[2], e[3]};
    std::sort(s.begin(), s.end());
    const auto cls = classify_4tuple(h, s);
    return {s, cls.rule,
            {delta_unchecked(s[0], s[1]), delta_unchecked(s[1], s[2]), delta_unchecked(s[2], s[3])}};
}

bool is_edge(const StepUpHypergraph& h, std::span<const Vertex, 4> e) {
    std::array<Vertex, 4> s{e[0], e[1], e[2], e[3]};
    std::sort(s.begin(), s.end());
    return classify_4tuple(h, s).is_edge;
}

EdgeTable::EdgeTable(const PairColoring& phi)
    : EdgeTable(phi.size(), [&phi](unsigned a, unsigned b, unsigned c) { return classify_deltas(phi, a, b, c).is_edge; }) {}

EdgeTable::EdgeTable(int bits, const std::function<bool(unsigned, unsigned, unsigned)>& predicate)
    : bits_(bits), table_(static_cast<std::size_t>(bits) * bits * bits, 0) {
    for (int a = 0; a < bits; ++a)
        for (int b = 0; b < bits; ++b)
            for (int c = 0; c < bits; ++c) {
                if (a == b || b == c) continue;
                if (a > b && b < c && a == c) continue;
                table_[(a * bits_ + b) * bits_ + c] = predicate(a, b, c) ? 1 : 0;
            }
}

namespace {

// One shard: every 5-set whose two smallest vertices are (a, b).
std::optional<std::array<Vertex, 5>> scan_shard(const EdgeTable& E, Vertex a, Vertex b, Vertex n) {
    const auto d = delta_unchecked;
    const unsigned dab = d(a, b);
    for (Vertex c = b + 1; c < n; ++c) {
        const unsigned dbc = d(b, c), dac = d(a, c);
        for (Vertex v4 = c + 1; v4 < n; ++v4) {
            const unsigned dcd = d(c, v4);
            if (!E(dab, dbc, dcd)) continue; // {a,b,c,d} fails for every e
            const unsigned dbd = d(b, v4);
            for (Vertex e = v4 + 1; e < n; ++e) {
                const unsigned dde = d(v4, e);
                if (!E(dbc, dcd, dde)) continue;          // {b,c,d,e}
                if (!E(dac, dcd, dde)) continue;          // {a,c,d,e}
                if (!E(dab, dbd, dde)) continue;          // {a,b,d,e}
                if (!E(dab, dbc, d(c, e))) continue;      // {a,b,c,e}
                return std::array<Vertex, 5>{a, b, c, v4, e};
            }
        }
    }
    return std::nullopt;
}

} // namespace

K5Result check_k5_free(const StepUpHypergraph& h, const K5Options& options) {
    K5Options opts = options;
    if (!opts.vertex_cap) opts.vertex_cap = h.vertex_count();
    if (*opts.vertex_cap > h.vertex_count())
        throw Error(ErrorCode::InvalidParams, "vertex cap exceeds 2^D");
    auto result = check_k5_free(EdgeTable(h.coloring()), opts);
    if (result.violation) {
        // Re-derive the note from the real predicate so the report is self-contained.
        std::ostringstream note;
        const auto& v = result.violation->vertices;
        note << "all five 4-subsets are edges:";
        for (int skip = 4; skip >= 0; --skip) {
            std::array<Vertex, 4> sub{};
            for (int i = 0, j = 0; i < 5; ++i)
                if (i != skip) sub[j++] = v[i];
            note << ' ' << to_string(classify_4tuple(h, sub).rule);
        }
        result.violation->note = note.str();
    }
    return result;
}

K5Result check_k5_free(const EdgeTable& table, const K5Options& options) {
    const std::uint64_t full = table.bits() >= kMaxBits ? UINT64_MAX : (std::uint64_t{1} << table.bits());
    const std::uint64_t n = options.vertex_cap.value_or(full);
    if (n > full) throw Error(ErrorCode::InvalidParams, "vertex cap exceeds 2^D");
    const std::uint64_t total = binomial(n, 5);
    if (total > options.five_set_cap && !options.force)
        throw Error(ErrorCode::BudgetExceeded, "binom(" + std::to_string(n) + ",5) = " + std::to_string(total) +
                                                   " five-sets exceeds cap " + std::to_string(options.five_set_cap) +
                                                   " (use force)");

    K5Result result;
    result.vertices = n;
    if (n < 5) return result;

    // Shard s is the s-th pair (a, b) in lexicographic order; row_start[a] is
    // the index of (a, a+1). Only a <= n-5 can lead a 5-set.
    const std::uint64_t rows = n - 4;
    std::vector<std::uint64_t> row_start(rows + 1, 0);
    for (std::uint64_t a = 0; a < rows; ++a) row_start[a + 1] = row_start[a] + (n - 4 - a);
    const std::uint64_t shard_count = row_start[rows];
    auto shard_pair = [&](std::uint64_t s) {
        const auto it = std::upper_bound(row_start.begin(), row_start.end(), s);
        const std::uint64_t a = static_cast<std::uint64_t>(it - row_start.begin()) - 1;
        return std::pair<Vertex, Vertex>{a, a + 1 + (s - row_start[a])};
    };

    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best_shard{UINT64_MAX};
    std::atomic<bool> cancelled{false};
    std::mutex mu;
    std::optional<std::array<Vertex, 5>> best;

    auto worker = [&] {
        for (;;) {
            if (options.stop.stop_requested()) {
                cancelled = true;
                return;
            }
            const std::uint64_t s = next.fetch_add(1, std::memory_order_relaxed);
            if (s >= shard_count || s > best_shard.load(std::memory_order_relaxed)) return;
            const auto [a, b] = shard_pair(s);
            if (auto hit = scan_shard(table, a, b, n)) {
                std::lock_guard lock(mu);
                if (s < best_shard.load()) {
                    best_shard = s;
                    best = hit;
                }
            }
        }
    };

    const unsigned threads = std::max(1U, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    result.cancelled = cancelled.load();
    const std::uint64_t last = best ? best_shard.load() + 1 : shard_count;
    result.shards = last;
    for (std::uint64_t s = 0; s < last; ++s) {
        const auto [a, b] = shard_pair(s);
        result.five_sets += binomial(n - 1 - b, 3);
    }
    if (best) result.violation = FiveSetViolation{*best, {}};
    return result;
}

std::array<Vertex, 4> find_nonedge_in_5set(const StepUpHypergraph& h, std::span<const Vertex, 5> p) {
    require_ordered(p, 5);
    require_in_graph(h, p);
    for (int skip = 4; skip >= 0; --skip) {
        std::array<Vertex, 4> sub{};
        for (int i = 0, j = 0; i < 5; ++i)
            if (i != skip) sub[j++] = p[i];
        if (!classify_4tuple(h, sub).is_edge) return sub;
    }
    throw Error(ErrorCode::NoNonEdge, "every 4-subset of " + show(p) + " is an edge");
}

std::optional<Edge> is_independent(const StepUpHypergraph& h, std::span<const Vertex> q, std::uint64_t cap) {
    if (q.size() < 4) throw Error(ErrorCode::SetTooSmall, "independence check needs at least 4 vertices");
    std::vector<Vertex> s(q.begin(), q.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw Error(ErrorCode::MalformedTuple, "duplicate vertices in " + show(q));
    require_in_graph(h, s);
    const std::uint64_t total = binomial(s.size(), 4);
    if (total > cap)
        throw Error(ErrorCode::BudgetExceeded,
                    std::to_string(total) + " four-sets exceeds cap " + std::to_string(cap));

    const auto& phi = h.coloring();
    const std::size_t m = s.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const unsigned d1 = delta_unchecked(s[i], s[j]);
            for (std::size_t k = j + 1; k < m; ++k) {
                const unsigned d2 = delta_unchecked(s[j], s[k]);
                for (std::size_t l = k + 1; l < m; ++l) {
                    const unsigned d3 = delta_unchecked(s[k], s[l]);
                    const auto cls = classify_deltas(phi, d1, d2, d3);
                    if (cls.is_edge)
                        return Edge{{s[i], s[j], s[k], s[l]},
                                    cls.rule,
                                    {static_cast<BitIndex>(d1), static_cast<BitIndex>(d2), static_cast<BitIndex>(d3)}};
                }
            }
        }
    return std::nullopt;
}

namespace {

std::vector<Vertex> mask_to_vertices(std::uint64_t mask) {
    std::vector<Vertex> out;
    for (; mask; mask &= mask - 1) out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    return out;
}

// All edges of H as vertex bitmasks, N = 2^D <= 64.
std::vector<std::uint64_t> edge_masks(const StepUpHypergraph& h) {
    const unsigned n = static_cast<unsigned>(h.vertex_count());
    std::vector<std::uint64_t> out;
    std::array<unsigned, 4> idx{0, 1, 2, 3};
    if (n < 4) return out;
    do {
        const auto cls = classify_deltas(h.coloring(), delta_unchecked(idx[0], idx[1]),
                                         delta_unchecked(idx[1], idx[2]), delta_unchecked(idx[2], idx[3]));
        if (cls.is_edge) {
            std::uint64_t m = 0;
            for (auto v : idx) m |= std::uint64_t{1} << v;
            out.push_back(m);
        }
    } while (next_combination<unsigned>(idx, n));
    return out;
}

AlphaResult alpha_by_bitmask(const StepUpHypergraph& h) {
    const unsigned n = static_cast<unsigned>(h.vertex_count());
    // Edges grouped by their largest vertex.
    std::vector<std::vector<std::uint32_t>> by_top(n);
    for (auto m : edge_masks(h)) by_top[63 - std::countl_zero(m)].push_back(static_cast<std::uint32_t>(m));

    const std::uint32_t limit = n >= 32 ? 0 : (1U << n);
    std::vector<std::uint8_t> independent(limit, 0);
    independent[0] = 1;
    AlphaResult best{0, {}, 0};
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        const unsigned top = 31 - std::countl_zero(mask);
        bool ok = independent[mask ^ (1U << top)] != 0;
        if (ok)
            for (auto e : by_top[top])
                if ((e & mask) == e) {
                    ok = false;
                    break;
                }
        independent[mask] = ok;
        if (ok && static_cast<std::uint64_t>(std::popcount(mask)) > best.alpha) {
            best.alpha = std::popcount(mask);
            best_mask = mask;
        }
    }
    best.nodes = limit;
    best.witness = mask_to_vertices(best_mask);
    return best;
}

class AlphaBranchAndBound {
public:
    explicit AlphaBranchAndBound(const StepUpHypergraph& h) : n_(static_cast<unsigned>(h.vertex_count())) {
        // completes_[x][y][v]: vertices w with {x, y, v, w} an edge.
        completes_.assign(static_cast<std::size_t>(n_) * n_ * n_, 0);
        for (auto m : edge_masks(h)) {
            const auto vs = mask_to_vertices(m);
            for (int w = 0; w < 4; ++w) {
                std::array<unsigned, 3> rest{};
                for (int i = 0, j = 0; i < 4; ++i)
                    if (i != w) rest[j++] = static_cast<unsigned>(vs[i]);
                // chosen vertices are always below the branching vertex, so
                // only the sorted order of the three is ever looked up
                completes_[slot(rest[0], rest[1], rest[2])] |= std::uint64_t{1} << vs[w];
            }
        }
    }

    AlphaResult run() {
        const std::uint64_t all = n_ >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
        expand(0, all, 0);
        return {best_size_, mask_to_vertices(best_mask_), nodes_};
    }

private:
    std::size_t slot(unsigned x, unsigned y, unsigned v) const noexcept {
        return (static_cast<std::size_t>(x) * n_ + y) * n_ + v;
    }

    void expand(std::uint64_t chosen, std::uint64_t cand, unsigned size) {
        ++nodes_;
        if (size + static_cast<unsigned>(std::popcount(cand)) <= best_size_) return;
        if (cand == 0) {
            best_size_ = size;
            best_mask_ = chosen;
            return;
        }
        const unsigned v = static_cast<unsigned>(std::countr_zero(cand));
        const std::uint64_t bit = std::uint64_t{1} << v;
        std::uint64_t forbidden = 0;
        for (std::uint64_t xs = chosen; xs; xs &= xs - 1) {
            const unsigned x = static_cast<unsigned>(std::countr_zero(xs));
            for (std::uint64_t ys = xs & (xs - 1); ys; ys &= ys - 1)
                forbidden |= completes_[slot(x, static_cast<unsigned>(std::countr_zero(ys)), v)];
        }
        expand(chosen | bit, cand & ~bit & ~forbidden, size + 1);
        expand(chosen, cand & ~bit, size);
    }

    unsigned n_;
    std::vector<std::uint64_t> completes_;
    std::uint64_t best_size_ = 0;
    std::uint64_t best_mask_ = 0;
    std::uint64_t nodes_ = 0;
};

} // namespace

AlphaResult exact_alpha(const StepUpHypergraph& h, int max_bits) {
    if (h.bits() > max_bits || h.bits() > 6)
        throw Error(ErrorCode::BudgetExceeded,
                    "exact alpha limited to D <= " + std::to_string(std::min(max_bits, 6)) + ", got D = " +
                        std::to_string(h.bits()));
    if (h.bits() <= 4) return alpha_by_bitmask(h);
    return AlphaBranchAndBound(h).run();
}

std::string_view to_string(EdgeRule r) noexcept {
    switch (r) {
    case EdgeRule::RuleI: return "RuleI";
    case EdgeRule::RuleII: return "RuleII";
    case EdgeRule::RuleIII: return "RuleIII";
    case EdgeRule::None: return "None";
    }
    return "?";
}

} // namespace stepup
