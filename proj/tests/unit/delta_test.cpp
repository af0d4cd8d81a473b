#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"
#include "stepup/delta.hpp"
#include "support.hpp"

using namespace stepup;

TEST(Delta, SmallExamples) {
    EXPECT_EQ(delta(0, 1), 0);
    EXPECT_EQ(delta(5, 6), 1);
    EXPECT_EQ(delta(2, 6), 2);
    EXPECT_EQ(delta(6, 2), 2);
    EXPECT_EQ(delta(0, UINT64_MAX), 63);
}

TEST(Delta, EqualVerticesRejected) {
    try {
        delta(7, 7);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EqualVertices);
    }
}

TEST(Delta, MatchesBitScanOracle) {
    Rng rng(11);
    for (int i = 0; i < 100000; ++i) {
        const auto u = rng.next() >> rng.below(64), v = rng.next() >> rng.below(64);
        if (u == v) continue;
        ASSERT_EQ(delta(u, v), oracle::msb_diff(u, v));
        ASSERT_EQ(delta(u, v), delta(v, u));
    }
}

TEST(DeltaSequence, Examples) {
    EXPECT_EQ(delta_sequence(std::vector<Vertex>{0, 2, 6, 14}), (DeltaSeq{1, 2, 3}));
    EXPECT_EQ(delta_sequence(std::vector<Vertex>{0, 1}), (DeltaSeq{0}));
    EXPECT_EQ(delta_sequence(std::vector<Vertex>{1, 2, 3}), (DeltaSeq{1, 0}));
}

TEST(DeltaSequence, RejectsShortOrUnordered) {
    auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code_of([] { delta_sequence(std::vector<Vertex>{4}); }), ErrorCode::TupleTooShort);
    EXPECT_EQ(code_of([] { delta_sequence(std::vector<Vertex>{4, 4}); }), ErrorCode::MalformedTuple);
    EXPECT_EQ(code_of([] { delta_sequence(std::vector<Vertex>{5, 3}); }), ErrorCode::MalformedTuple);
}

TEST(ClassifyPosition, Examples) {
    const DeltaSeq inc{1, 2, 3}, valley{3, 1, 2}, peak{1, 3, 2};
    EXPECT_EQ(classify_position(inc, 1), Extremum::LocalMonotone);
    EXPECT_EQ(classify_position(valley, 1), Extremum::LocalMin);
    EXPECT_EQ(classify_position(peak, 1), Extremum::LocalMax);
    EXPECT_EQ(classify_position(peak, 0), Extremum::Boundary);
    EXPECT_EQ(classify_position(peak, 2), Extremum::Boundary);
    EXPECT_THROW(classify_position(peak, 3), Error);
}

TEST(SpanDelta, EqualsMaxOfSequence) {
    EXPECT_EQ(span_delta(std::vector<Vertex>{0, 2, 6, 14}), 3);
    EXPECT_EQ(span_delta(std::vector<Vertex>{1, 2, 3}), 1);
    Rng rng(3);
    for (int i = 0; i < 20000; ++i) {
        const auto t = testing_support::random_tuple(rng, 30, 2 + rng.below(10));
        const auto seq = delta_sequence(t);
        ASSERT_EQ(span_delta(t), *std::max_element(seq.begin(), seq.end()));
    }
}

TEST(SteppingProperties, Examples) {
    EXPECT_TRUE(check_stepping_properties(std::vector<Vertex>{0, 2, 6, 14}).pass);
    const std::vector<Vertex> descent{0, 8, 9, 13};
    EXPECT_EQ(delta_sequence(descent), (DeltaSeq{3, 0, 2}));
    EXPECT_TRUE(check_stepping_properties(descent).pass);
}

TEST(SteppingProperties, RandomTuplesPass) {
    Rng rng(5);
    for (int i = 0; i < 20000; ++i) {
        const int bits = 3 + static_cast<int>(rng.below(28));
        const auto t = testing_support::random_tuple(rng, bits, 3 + rng.below(6));
        const auto r = check_stepping_properties(t);
        ASSERT_TRUE(r.pass) << r.failed_property << ": " << r.detail;
    }
}

TEST(Monotone, DirectionAndExtremum) {
    EXPECT_EQ(monotone_direction(DeltaSeq{1, 2, 5}), Direction::Increasing);
    EXPECT_EQ(monotone_direction(DeltaSeq{5, 2, 1}), Direction::Decreasing);
    EXPECT_EQ(monotone_direction(DeltaSeq{1, 3, 2}), std::nullopt);
    EXPECT_EQ(first_local_extremum(DeltaSeq{0, 1, 2, 0}), 2U);
    EXPECT_EQ(first_local_extremum(DeltaSeq{0, 1, 2}), std::nullopt);
}

// Every realizable delta sequence of length <= 7 over {0..7} with distinct
// neighbours is either monotone or has an interior extremum.
TEST(Fact, NonMonotoneHasExtremumSmall) {
    std::vector<int> seq;
    std::uint64_t realizable = 0;
    std::function<void()> rec = [&] {
        if (seq.size() >= 2) {
            if (auto v = oracle::realize(seq)) {
                ++realizable;
                std::vector<Vertex> tuple(v->begin(), v->end());
                DeltaSeq d = delta_sequence(tuple);
                ASSERT_EQ(d.size(), seq.size());
                if (!monotone_direction(d)) ASSERT_TRUE(first_local_extremum(d).has_value());
            }
        }
        if (seq.size() == 7) return;
        for (int x = 0; x < 8; ++x) {
            if (!seq.empty() && seq.back() == x) continue;
            seq.push_back(x);
            rec();
            seq.pop_back();
        }
    };
    rec();
    EXPECT_GT(realizable, 1000U);
}
