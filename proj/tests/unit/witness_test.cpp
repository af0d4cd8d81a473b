#include <gtest/gtest.h>

#include <numeric>

#include "stepup/qfile.hpp"
#include "stepup/report.hpp"
#include "stepup/witness.hpp"
#include "support.hpp"

using namespace stepup;

namespace {

std::vector<Vertex> full_range(int bits) {
    std::vector<Vertex> q(std::size_t{1} << bits);
    std::iota(q.begin(), q.end(), Vertex{0});
    return q;
}

bool in_q(const std::vector<Vertex>& q, const Edge& e) {
    return std::all_of(e.vertices.begin(), e.vertices.end(),
                       [&](Vertex v) { return std::binary_search(q.begin(), q.end(), v); });
}

void expect_anchor_invariants(const LayerStack& stack, const PairColoring& phi, const Anchors& an) {
    EXPECT_LT(an.b1.position, an.b2.position);
    EXPECT_LT(an.b2.position, an.b3.position);
    EXPECT_LT(an.b3.position, an.a.position);
    EXPECT_LT(an.b3.delta, an.b2.delta);
    EXPECT_LT(an.b2.delta, an.b1.delta);
    EXPECT_LT(an.b1.delta, an.a.delta);
    EXPECT_EQ(phi.blue(an.B1.delta, an.a.delta), phi.blue(an.B3.delta, an.a.delta));
    EXPECT_EQ(an.a.layer, 7U);
    EXPECT_EQ(an.b1.layer, 6U);
    EXPECT_EQ(an.b2.layer, 5U);
    EXPECT_EQ(an.b3.layer, 4U);
    EXPECT_EQ(an.c.layer + 1, an.B3.layer);
    EXPECT_EQ(an.f.layer + 4, an.B3.layer);
    for (const auto* p : {&an.a, &an.b1, &an.b2, &an.b3, &an.c, &an.d, &an.e, &an.f})
        EXPECT_TRUE(stack.contains(p->layer, p->position));
}

} // namespace

TEST(Layers, FourVerticesRunOut) {
    const std::vector<Vertex> q{0, 1, 2, 3};
    try {
        build_layers(q, 3);
        FAIL();
    } catch (const ExtractorError& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientLayers);
        const auto trace = Json::parse(e.trace());
        ASSERT_EQ(trace["layers"].size(), 2U);
        EXPECT_EQ(trace["layers"][1]["size"], 1);
    }
}

TEST(Layers, IncreasingRunAtLayerZero) {
    const std::vector<Vertex> q{0, 2, 6, 14, 30};
    const auto b = build_layers(q, 3);
    ASSERT_TRUE(b.run);
    EXPECT_EQ(b.run->layer, 0U);
    EXPECT_EQ(b.run->direction, Direction::Increasing);
    EXPECT_EQ(b.run->positions, (std::vector<Position>{0, 1, 2}));
}

TEST(Layers, ParameterErrors) {
    EXPECT_THROW(build_layers(std::vector<Vertex>{0, 1, 2, 3, 4}, 2), Error);
    EXPECT_THROW(build_layers(std::vector<Vertex>{3}, 3), Error);
}

TEST(Layers, RulerStack) {
    const auto q = full_range(10);
    const auto b = build_layers(q, 3);
    ASSERT_FALSE(b.run);
    ASSERT_EQ(b.stack.depth(), 8U);
    for (std::size_t t = 0; t <= 7; ++t)
        for (auto p : b.stack.layer(t)) ASSERT_GE(b.stack.delta_at(p), t);
    EXPECT_EQ(b.stack.layer(7), (std::vector<Position>{127, 255, 383, 511, 639, 767, 895}));
    EXPECT_TRUE(verify_star_property(b.stack).pass);
}

TEST(Layers, StarPropertyOnRandomStacks) {
    Rng rng(21);
    for (int i = 0; i < 30; ++i) {
        const int bits = 13 + static_cast<int>(rng.below(12));
        const auto q = generate_q(i, 3000 + rng.below(3000), bits);
        for (int n : {3, 5, 9}) {
            try {
                const auto b = build_layers(q, n);
                const auto r = verify_star_property(b.stack);
                ASSERT_TRUE(r.pass) << r.failed_property << " " << r.detail;
            } catch (const ExtractorError& e) {
                ASSERT_EQ(e.code(), ErrorCode::InsufficientLayers);
            }
        }
    }
}

TEST(Layers, StarPropertyCatchesCorruption) {
    const auto q = full_range(8);
    auto b = build_layers(q, 3);
    EXPECT_TRUE(verify_star_property(b.stack).pass);
    // positions 63 and 127 are consecutive in layer 6; lift one delta between them
    b.stack.mutable_deltas()[100] = 9;
    const auto r = verify_star_property(b.stack);
    EXPECT_FALSE(r.pass);
    EXPECT_NE(r.detail.find("100"), std::string::npos);
    EXPECT_TRUE(verify_star_property(LayerStack(DeltaSeq{1, 0}, 3)).pass);
}

TEST(Run, IncreasingExample) {
    PairColoring phi(4);
    phi.set(1, 3, Color::Blue);
    const StepUpHypergraph h(phi);
    const std::vector<Vertex> q{0, 2, 6, 14};
    LayerStack stack(delta_sequence(q), 3);
    stack.push_layer({0, 1, 2});
    const auto w = edge_from_monotone_run(h, q, stack, MonotoneRun{0, {0, 1, 2}, Direction::Increasing});
    EXPECT_EQ(w.edge.vertices, (std::array<Vertex, 4>{0, 2, 6, 14}));
    EXPECT_EQ(w.edge.rule, EdgeRule::RuleI);
    EXPECT_EQ(w.branch, Branch::MonotoneRun);
}

TEST(Run, DecreasingExample) {
    PairColoring phi(4);
    phi.set(1, 3, Color::Blue);
    const StepUpHypergraph h(phi);
    const std::vector<Vertex> q{0, 8, 12, 14};
    EXPECT_EQ(delta_sequence(q), (DeltaSeq{3, 2, 1}));
    LayerStack stack(delta_sequence(q), 3);
    stack.push_layer({0, 1, 2});
    const auto w = edge_from_monotone_run(h, q, stack, MonotoneRun{0, {0, 1, 2}, Direction::Decreasing});
    EXPECT_EQ(w.edge.vertices, (std::array<Vertex, 4>{0, 8, 12, 14}));
    EXPECT_EQ(w.edge.deltas, (std::array<BitIndex, 3>{3, 2, 1}));
}

TEST(Run, NoGoodTripleIsReported) {
    const StepUpHypergraph h(uniform_coloring(4, Color::Red));
    const std::vector<Vertex> q{0, 2, 6, 14};
    LayerStack stack(delta_sequence(q), 3);
    stack.push_layer({0, 1, 2});
    try {
        edge_from_monotone_run(h, q, stack, MonotoneRun{0, {0, 1, 2}, Direction::Increasing});
        FAIL();
    } catch (const ExtractorError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoGoodTripleInRun);
    }
}

// Runs found at any layer map to 4-tuples whose measured deltas are the
// chosen triple in value order.
TEST(Run, MappedDeltasMatchTripleAtEveryLayer) {
    std::size_t upper_layer_runs = 0, runs = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        // small sets often lack a run at layer 0, large ones rarely do
        const auto q = generate_q(seed, seed % 2 == 0 ? 4000 : 60 + seed, 30);
        const auto phi = sample_coloring(30, seed);
        const StepUpHypergraph h(phi);
        for (int n : {5, 6, 7}) {
            LayerBuild b = [&] {
                try {
                    return build_layers(q, n);
                } catch (const ExtractorError&) {
                    return LayerBuild{LayerStack(DeltaSeq{}, n), std::nullopt};
                }
            }();
            if (!b.run) continue;
            try {
                const auto w = edge_from_monotone_run(h, q, b.stack, *b.run);
                ++runs;
                upper_layer_runs += b.run->layer > 0 ? 1 : 0;
                std::array<int, 3> tri{w.good_triple->a, w.good_triple->b, w.good_triple->c};
                if (b.run->direction == Direction::Decreasing) std::reverse(tri.begin(), tri.end());
                const auto d = delta_sequence(w.edge.vertices);
                ASSERT_EQ((std::array<int, 3>{d[0], d[1], d[2]}), tri);
                ASSERT_TRUE(is_edge(h, w.edge.vertices));
                ASSERT_TRUE(in_q(q, w.edge));
            } catch (const ExtractorError& e) {
                ASSERT_EQ(e.code(), ErrorCode::NoGoodTripleInRun);
            }
        }
    }
    EXPECT_GT(runs, 50U);
    EXPECT_GT(upper_layer_runs, 0U);
}

TEST(Anchors, RulerChain) {
    const auto q = full_range(10);
    const auto b = build_layers(q, 3);
    const auto phi = sample_coloring(10, 3);
    const auto an = select_anchors(b.stack, phi);
    EXPECT_EQ(an.a.position, 127U);
    EXPECT_EQ(an.b1.position, 63U);
    EXPECT_EQ(an.b2.position, 95U);
    EXPECT_EQ(an.b3.position, 111U);
    expect_anchor_invariants(b.stack, phi, an);
}

TEST(Anchors, PigeonholeAlwaysAgrees) {
    for (std::uint64_t m = 0; m < 8; ++m) {
        int colors[3] = {int(m & 1U), int((m >> 1) & 1U), int((m >> 2) & 1U)};
        bool pair = false;
        for (auto [i, j] : {std::pair{0, 2}, std::pair{0, 1}, std::pair{1, 2}}) pair = pair || colors[i] == colors[j];
        EXPECT_TRUE(pair);
    }
}

TEST(Anchors, NeedSevenLayers) {
    // the 2^7 ruler tops out at layer 6
    const auto q = full_range(7);
    try {
        select_anchors(build_layers(q, 3).stack, sample_coloring(7, 1));
        FAIL();
    } catch (const ExtractorError& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientLayers);
    }
}

TEST(Extract, AnchorBranchOnRuler) {
    const auto q = full_range(10);
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const auto phi = sample_coloring(10, seed);
        const StepUpHypergraph h(phi);
        const auto w = extract_edge(h, q, 3);
        ASSERT_EQ(w.branch, Branch::AnchorChain);
        ASSERT_TRUE(w.candidate_index);
        ASSERT_TRUE(is_edge(h, w.edge.vertices));
        ASSERT_TRUE(in_q(q, w.edge));
        expect_anchor_invariants(build_layers(q, 3).stack, phi, *w.anchors);
    }
}

// With n above the number of distinct delta values no run can exist, so the
// anchor chain has to produce the edge on its own.
TEST(Extract, AnchorBranchOnRandomSets) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto q = generate_q(seed, 30000, 16);
        const auto phi = sample_coloring(16, seed * 7 + 1);
        const StepUpHypergraph h(phi);
        const auto w = extract_edge(h, q, 17);
        ASSERT_EQ(w.branch, Branch::AnchorChain);
        ASSERT_TRUE(is_edge(h, w.edge.vertices));
        ASSERT_TRUE(in_q(q, w.edge));
        const auto b = build_layers(q, 17);
        expect_anchor_invariants(b.stack, phi, *w.anchors);
        ASSERT_TRUE(verify_star_property(b.stack).pass);
    }
}

TEST(Extract, SmallSets) {
    const StepUpHypergraph blue(uniform_coloring(4, Color::Blue));
    const auto w = extract_edge(blue, std::vector<Vertex>{0, 4, 5, 13}, 5);
    EXPECT_EQ(w.branch, Branch::SmallSetScan);
    EXPECT_EQ(w.edge.vertices, (std::array<Vertex, 4>{0, 4, 5, 13}));

    const StepUpHypergraph two(sample_coloring(2, 1));
    try {
        extract_edge(two, std::vector<Vertex>{0, 1, 2, 3}, 5);
        FAIL();
    } catch (const ExtractorError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NeedMoreVertices);
    }
    EXPECT_THROW(extract_edge(two, std::vector<Vertex>{0, 1, 2, 4}, 5), Error);
}

TEST(Extract, DeterministicTrace) {
    const auto q = generate_q(5, 50000, 20);
    const auto phi = sample_coloring(20, 5);
    const StepUpHypergraph h(phi);
    const auto a = to_json(extract_edge(h, q, 5), phi), b = to_json(extract_edge(h, q, 5), phi);
    EXPECT_EQ(a, b);
    EXPECT_EQ(edge_vertices_from_json(a), edge_vertices_from_json(b));
}

TEST(Extract, GuaranteedSize) {
    EXPECT_EQ(guaranteed_size(5), 10'000'001U);
    EXPECT_EQ(guaranteed_size(6), 35'831'809U);
}

TEST(QFile, GenerateAndRoundTrip) {
    const auto q = generate_q(3, 1000, 12);
    ASSERT_EQ(q.size(), 1000U);
    EXPECT_TRUE(std::is_sorted(q.begin(), q.end()));
    EXPECT_EQ(std::adjacent_find(q.begin(), q.end()), q.end());
    EXPECT_LT(q.back(), 4096U);
    EXPECT_EQ(generate_q(3, 1000, 12), q);
    EXPECT_EQ(generate_q(3, 4096, 12).size(), 4096U);
    const auto wide = generate_q(3, 5000, 40);
    EXPECT_EQ(wide.size(), 5000U);
    EXPECT_EQ(std::adjacent_find(wide.begin(), wide.end()), wide.end());

    int bits = 0;
    EXPECT_EQ(parse_q(serialize_q(q, 12), &bits), q);
    EXPECT_EQ(bits, 12);
    EXPECT_THROW(parse_q(serialize_q(q, 11)), Error);
    auto bytes = serialize_q(q, 12);
    EXPECT_THROW(parse_q(bytes.substr(0, bytes.size() - 3)), Error);
    EXPECT_THROW(generate_q(1, 5000, 12), Error);
}
