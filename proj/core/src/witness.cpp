#include "stepup/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stepup/combinatorics.hpp"
#include "stepup/report.hpp"

namespace stepup {

LayerStack::LayerStack(DeltaSeq deltas, int n) : deltas_(std::move(deltas)), n_(n) {}

double LayerStack::beta(std::size_t t) const {
    return static_cast<double>(vertex_count() - 1) / std::pow(2.0 * n_, static_cast<double>(t));
}

bool LayerStack::contains(std::size_t t, Position p) const {
    const auto& l = layer(t);
    return std::binary_search(l.begin(), l.end(), p);
}

std::size_t LayerStack::level(Position p) const {
    std::size_t t = 0;
    while (t + 1 < depth() && contains(t + 1, p)) ++t;
    return t;
}

std::optional<Position> LayerStack::left_neighbor(std::size_t t, Position p) const {
    const auto& l = layer(t);
    const auto it = std::lower_bound(l.begin(), l.end(), p);
    if (it == l.begin()) return std::nullopt;
    return *std::prev(it);
}

std::optional<Position> LayerStack::right_neighbor(std::size_t t, Position p) const {
    const auto& l = layer(t);
    const auto it = std::upper_bound(l.begin(), l.end(), p);
    if (it == l.end()) return std::nullopt;
    return *it;
}

std::uint64_t guaranteed_size(int n) noexcept {
    std::uint64_t r = 1;
    for (int i = 0; i < kLayerDepth; ++i) {
        if (r > UINT64_MAX / (2ULL * n)) return UINT64_MAX;
        r *= 2ULL * n;
    }
    return r + 1;
}

namespace {

// Leftmost window of n consecutive layer entries with strictly monotone deltas.
std::optional<MonotoneRun> find_run(const LayerStack& stack, std::size_t t, int n) {
    const auto& l = stack.layer(t);
    const auto& d = stack.deltas();
    if (l.size() < static_cast<std::size_t>(n)) return std::nullopt;
    std::size_t up = 1, down = 1; // lengths of the monotone runs ending at i
    for (std::size_t i = 1; i < l.size(); ++i) {
        const auto prev = d[l[i - 1]], cur = d[l[i]];
        up = prev < cur ? up + 1 : 1;
        down = prev > cur ? down + 1 : 1;
        const bool inc = up >= static_cast<std::size_t>(n);
        if (inc || down >= static_cast<std::size_t>(n)) {
            MonotoneRun run;
            run.layer = t;
            run.direction = inc ? Direction::Increasing : Direction::Decreasing;
            run.positions.assign(l.begin() + static_cast<std::ptrdiff_t>(i + 1 - n),
                                 l.begin() + static_cast<std::ptrdiff_t>(i + 1));
            return run;
        }
    }
    return std::nullopt;
}

std::vector<Position> local_maxima(const LayerStack& stack, std::size_t t) {
    const auto& l = stack.layer(t);
    const auto& d = stack.deltas();
    std::vector<Position> out;
    for (std::size_t i = 1; i + 1 < l.size(); ++i)
        if (d[l[i - 1]] < d[l[i]] && d[l[i]] > d[l[i + 1]]) out.push_back(l[i]);
    return out;
}

std::array<Vertex, 4> pick(std::span<const Vertex> q, const std::array<std::size_t, 4>& idx) {
    return {q[idx[0]], q[idx[1]], q[idx[2]], q[idx[3]]};
}

void fill_layer_info(EdgeWitness& w, const LayerStack& stack) {
    w.layer_sizes.clear();
    w.beta.clear();
    for (std::size_t t = 0; t < stack.depth(); ++t) {
        w.layer_sizes.push_back(stack.layer(t).size());
        w.beta.push_back(stack.beta(t));
    }
}

} // namespace

LayerBuild build_layers(std::span<const Vertex> q, int n) {
    if (n < 3) throw Error(ErrorCode::InvalidN, "run length n must be >= 3, got " + std::to_string(n));
    if (q.size() - 1 > std::numeric_limits<Position>::max())
        throw Error(ErrorCode::InvalidParams, "Q too large for 32-bit positions");
    LayerBuild out{LayerStack(delta_sequence(q), n), std::nullopt};
    auto& stack = out.stack;

    std::vector<Position> all(stack.deltas().size());
    std::iota(all.begin(), all.end(), Position{0});
    stack.push_layer(std::move(all));

    for (std::size_t t = 1; t <= kLayerDepth; ++t) {
        if (auto run = find_run(stack, t - 1, n)) {
            out.run = std::move(run);
            return out;
        }
        auto next = local_maxima(stack, t - 1);
        if (next.empty()) {
            Json trace = layer_summary(stack);
            trace["empty_layer"] = t;
            throw ExtractorError(ErrorCode::InsufficientLayers,
                                 "layer " + std::to_string(t) + " is empty (|Q| = " + std::to_string(q.size()) + ")",
                                 trace.dump());
        }
        stack.push_layer(std::move(next));
    }
    return out;
}

EdgeWitness edge_from_monotone_run(const StepUpHypergraph& h, std::span<const Vertex> q, const LayerStack& stack,
                                   const MonotoneRun& run) {
    std::vector<int> values;
    values.reserve(run.positions.size());
    for (auto p : run.positions) values.push_back(stack.delta_at(p));

    const auto triple = find_good_triple(h.coloring(), values);
    if (!triple) {
        Json trace{{"run", to_json(run, stack)}, {"layers", layer_summary(stack)}};
        throw ExtractorError(ErrorCode::NoGoodTripleInRun, "coloring has no good triple on the run's delta values",
                             trace.dump());
    }

    auto position_of = [&](int value) {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == value) return static_cast<std::size_t>(run.positions[i]);
        return std::size_t{0}; // unreachable: triple values come from `values`
    };
    std::array<std::size_t, 4> idx{};
    std::array<int, 3> expected{};
    if (run.direction == Direction::Increasing) {
        const auto p = position_of(triple->a), qq = position_of(triple->b), r = position_of(triple->c);
        idx = {p, p + 1, qq + 1, r + 1};
        expected = {triple->a, triple->b, triple->c};
    } else {
        const auto p = position_of(triple->c), qq = position_of(triple->b), r = position_of(triple->a);
        idx = {p, qq, r, r + 1};
        expected = {triple->c, triple->b, triple->a};
    }

    EdgeWitness w;
    w.branch = Branch::MonotoneRun;
    w.run = run;
    w.good_triple = triple;
    w.q_indices = idx;
    fill_layer_info(w, stack);

    const auto vs = pick(q, idx);
    const auto measured = delta_sequence(vs);
    const auto cls = classify_4tuple(h, vs);
    if (measured != DeltaSeq{static_cast<BitIndex>(expected[0]), static_cast<BitIndex>(expected[1]),
                             static_cast<BitIndex>(expected[2])} ||
        !cls.is_edge) {
        Json trace{{"run", to_json(run, stack)}, {"q_indices", idx}, {"measured_deltas", measured},
                   {"expected_deltas", expected}};
        throw ExtractorError(ErrorCode::ProofGapTrap, "monotone run did not map to a rule (i) edge", trace.dump());
    }
    w.edge = describe_4set(h, vs);
    return w;
}

Anchors select_anchors(const LayerStack& stack, const PairColoring& phi) {
    auto fail = [&](const std::string& what) -> ExtractorError {
        return ExtractorError(ErrorCode::InsufficientLayers, what, layer_summary(stack).dump());
    };
    if (stack.depth() < kLayerDepth + 1 || stack.layer(kLayerDepth).empty())
        throw fail("anchor selection needs " + std::to_string(kLayerDepth) + " nonempty layers");

    auto point = [&](Position p, std::size_t layer) { return AnchorPoint{p, layer, stack.delta_at(p)}; };
    auto left = [&](const AnchorPoint& from, std::size_t t, const char* name) {
        const auto p = stack.left_neighbor(t, from.position);
        if (!p) throw fail(std::string("no left neighbor in layer ") + std::to_string(t) + " for anchor " + name);
        return point(*p, t);
    };
    auto right = [&](const AnchorPoint& from, std::size_t t, const char* name) {
        const auto p = stack.right_neighbor(t, from.position);
        if (!p) throw fail(std::string("no right neighbor in layer ") + std::to_string(t) + " for anchor " + name);
        return point(*p, t);
    };

    Anchors an;
    an.a = point(stack.layer(kLayerDepth).front(), kLayerDepth);
    an.b1 = left(an.a, 6, "b1");
    an.b2 = right(an.b1, 5, "b2");
    an.b3 = right(an.b2, 4, "b3");

    const std::array<AnchorPoint, 3> bs{an.b1, an.b2, an.b3};
    auto col = [&](const AnchorPoint& b) { return phi.blue(b.delta, an.a.delta); };
    for (auto [i, j] : {std::pair{1, 3}, std::pair{1, 2}, std::pair{2, 3}})
        if (col(bs[i - 1]) == col(bs[j - 1])) {
            an.pigeonhole = {i, j};
            break;
        }
    const auto [i, j] = an.pigeonhole;
    an.B1 = bs[i - 1];
    an.B3 = bs[j - 1];

    const std::size_t l = an.B3.layer;
    an.c = left(an.B3, l - 1, "c");
    an.d = right(an.c, l - 2, "d");
    an.e = left(an.d, l - 3, "e");
    an.f = right(an.e, l - 4, "f");

    const bool ordered = an.b1.position < an.b2.position && an.b2.position < an.b3.position &&
                         an.b3.position < an.a.position && an.b3.delta < an.b2.delta && an.b2.delta < an.b1.delta &&
                         an.b1.delta < an.a.delta && an.B1.position <= an.c.position &&
                         an.c.position < an.e.position && an.e.position < an.f.position &&
                         an.f.position < an.d.position && an.d.position < an.B3.position;
    if (!ordered || col(an.B1) != col(an.B3)) {
        Json trace{{"anchors", to_json(an)}, {"layers", layer_summary(stack)}};
        throw ExtractorError(ErrorCode::ProofGapTrap, "anchor invariants violated", trace.dump());
    }
    return an;
}

namespace {

std::vector<std::pair<std::string, std::array<std::size_t, 4>>> anchor_candidates(const Anchors& an) {
    const std::size_t a = an.a.position, B1 = an.B1.position, B3 = an.B3.position;
    const std::size_t c = an.c.position, d = an.d.position, e = an.e.position, f = an.f.position;
    std::vector<std::pair<std::string, std::array<std::size_t, 4>>> out;
    for (auto [name, x] : {std::pair{"c", c}, std::pair{"d", d}, std::pair{"e", e}, std::pair{"f", f}}) {
        const std::string s(name);
        out.push_back({"(x,x+1,B3+1,a+1) x=" + s, {x, x + 1, B3 + 1, a + 1}});
        out.push_back({"(B1,B3,B3+1,a+1) x=" + s, {B1, B3, B3 + 1, a + 1}});
        out.push_back({"(B1,x,x+1,a+1) x=" + s, {B1, x, x + 1, a + 1}});
        out.push_back({"(B1,x,x+1,B3+1) x=" + s, {B1, x, x + 1, B3 + 1}});
    }
    out.push_back({"(c,d,d+1,B3+1)", {c, d, d + 1, B3 + 1}});
    out.push_back({"(c,e,e+1,B3+1)", {c, e, e + 1, B3 + 1}});
    out.push_back({"(c,f,f+1,B3+1)", {c, f, f + 1, B3 + 1}});
    out.push_back({"(e,f,f+1,B3+1)", {e, f, f + 1, B3 + 1}});
    out.push_back({"(c,e,e+1,d+1)", {c, e, e + 1, d + 1}});
    out.push_back({"(c,f,f+1,d+1)", {c, f, f + 1, d + 1}});
    out.push_back({"(e,f,f+1,d+1)", {e, f, f + 1, d + 1}});
    return out;
}

EdgeWitness small_set_scan(const StepUpHypergraph& h, std::span<const Vertex> q) {
    const auto edge = q.size() >= 4 ? is_independent(h, q, UINT64_MAX) : std::nullopt;
    if (!edge)
        throw ExtractorError(ErrorCode::NeedMoreVertices,
                             "Q (" + std::to_string(q.size()) + " vertices) spans no edge", Json{{"size", q.size()}}.dump());
    EdgeWitness w;
    w.branch = Branch::SmallSetScan;
    w.edge = *edge;
    for (std::size_t k = 0; k < 4; ++k)
        w.q_indices[k] = static_cast<std::size_t>(std::lower_bound(q.begin(), q.end(), edge->vertices[k]) - q.begin());
    return w;
}

EdgeWitness layered_search(const StepUpHypergraph& h, std::span<const Vertex> q, int n) {
    auto build = build_layers(q, n);
    const auto& stack = build.stack;
    if (build.run) return edge_from_monotone_run(h, q, stack, *build.run);

    EdgeWitness w;
    w.branch = Branch::AnchorChain;
    fill_layer_info(w, stack);
    w.anchors = select_anchors(stack, h.coloring());

    for (auto& [label, idx] : anchor_candidates(*w.anchors)) {
        CandidateCheck check{label, idx};
        auto sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            check.skipped = true;
        } else {
            const auto cls = classify_4tuple(h, pick(q, sorted));
            check.is_edge = cls.is_edge;
            check.rule = cls.rule;
        }
        w.candidates.push_back(check);
        if (check.is_edge) {
            w.candidate_index = w.candidates.size() - 1;
            w.q_indices = sorted;
            w.edge = describe_4set(h, pick(q, sorted));
            return w;
        }
    }
    const bool guaranteed = q.size() >= guaranteed_size(n);
    Json trace = to_json(w, h.coloring());
    throw ExtractorError(guaranteed ? ErrorCode::ProofGapTrap : ErrorCode::NeedMoreVertices,
                         "no anchor candidate is an edge", trace.dump());
}

} // namespace

EdgeWitness extract_edge(const StepUpHypergraph& h, std::span<const Vertex> q, int n, const ExtractOptions& options) {
    if (n < 3) throw Error(ErrorCode::InvalidN, "run length n must be >= 3, got " + std::to_string(n));
    require_ordered(q, 1);
    for (auto v : q)
        if (!h.contains(v)) throw Error(ErrorCode::MalformedTuple, "vertex " + std::to_string(v) + " outside H");

    const bool small = binomial(q.size(), 4) <= options.small_set_cap;
    if (q.size() < 5) return small_set_scan(h, q);
    try {
        return layered_search(h, q, n);
    } catch (const ExtractorError& err) {
        if (err.code() == ErrorCode::ProofGapTrap || !small || q.size() >= guaranteed_size(n)) throw;
        return small_set_scan(h, q);
    }
}

PropertyReport verify_star_property(const LayerStack& stack) {
    const auto& d = stack.deltas();
    auto fail = [](std::string property, std::string detail) {
        return PropertyReport{false, std::move(property), std::move(detail)};
    };
    for (std::size_t t = 1; t < stack.depth(); ++t) {
        const auto& cur = stack.layer(t);
        const auto& below = stack.layer(t - 1);
        const std::string at = "layer " + std::to_string(t);

        if (!std::includes(below.begin(), below.end(), cur.begin(), cur.end()))
            return fail("nesting", at + " is not contained in the layer below");

        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const Position a = cur[i], b = cur[i + 1];
            if (a >= b) return fail("order", at + " is not increasing at " + std::to_string(a));
            if (d[a] == d[b])
                return fail("star", at + ": equal deltas at consecutive positions " + std::to_string(a) + ", " +
                                        std::to_string(b));
            const auto top = std::max(d[a], d[b]);
            for (Position x = a + 1; x < b; ++x)
                if (d[x] >= top)
                    return fail("star", at + ": position " + std::to_string(x) + " not dominated by " +
                                            std::to_string(a) + ", " + std::to_string(b));
        }

        for (auto j : cur) {
            const auto lo = stack.left_neighbor(t - 1, j), hi = stack.right_neighbor(t - 1, j);
            if (!lo || !hi)
                return fail("local-max", at + ": position " + std::to_string(j) + " lacks a neighbor below");
            for (Position x = *lo; x <= *hi; ++x)
                if (x != j && d[x] >= d[j])
                    return fail("observation", at + ": position " + std::to_string(x) + " in the window of " +
                                                   std::to_string(j) + " is not below it");
        }
    }
    return {};
}

std::string_view to_string(Branch b) noexcept {
    switch (b) {
    case Branch::MonotoneRun: return "MonotoneRun";
    case Branch::AnchorChain: return "AnchorChain";
    case Branch::SmallSetScan: return "SmallSetScan";
    }
    return "?";
}

} // namespace stepup
