#include <gtest/gtest.h>

#include <cmath>

#include "mpfr_oracle.hpp"
#include "oracles.hpp"
#include "stepup/coloring.hpp"
#include "stepup/combinatorics.hpp"
#include "stepup/rng.hpp"

using namespace stepup;

namespace {

PairColoring from_mask(int size, std::uint64_t mask) {
    PairColoring phi(size, mask);
    int k = 0;
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b, ++k)
            if ((mask >> k) & 1U) phi.set(a, b, Color::Blue);
    return phi;
}

oracle::Colors to_oracle(const PairColoring& phi) {
    oracle::Colors c(phi.size());
    for (int a = 0; a < phi.size(); ++a)
        for (int b = a + 1; b < phi.size(); ++b) c.set(a, b, phi.color(a, b) == Color::Blue ? 1 : 0);
    return c;
}

} // namespace

TEST(PairColoring, SymmetricAndChecked) {
    auto phi = sample_coloring(10, 4);
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            if (a != b) EXPECT_EQ(phi.color(a, b), phi.color(b, a));
    EXPECT_THROW(phi.color(3, 3), Error);
    EXPECT_THROW(phi.color(0, 10), Error);
    EXPECT_THROW(PairColoring(1), Error);
    EXPECT_THROW(PairColoring(65), Error);
}

TEST(SampleColoring, DeterministicPerSeed) {
    EXPECT_EQ(sample_coloring(24, 9), sample_coloring(24, 9));
    EXPECT_NE(sample_coloring(24, 9), sample_coloring(24, 10));
    EXPECT_EQ(sample_coloring(2, 1).pair_count(), 1U);
}

TEST(SampleColoring, RedFractionNearHalf) {
    std::uint64_t red = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto phi = sample_coloring(24, seed);
        for (int a = 0; a < 24; ++a)
            for (int b = a + 1; b < 24; ++b, ++total) red += phi.color(a, b) == Color::Red ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(red) / static_cast<double>(total), 0.5, 0.02);
}

TEST(GoodTriple, Examples) {
    PairColoring phi(4);
    phi.set(1, 3, Color::Blue);
    const std::vector<int> a{1, 2, 3};
    const auto t = find_good_triple(phi, a);
    ASSERT_TRUE(t);
    EXPECT_EQ(*t, (GoodTriple{1, 2, 3}));
    const std::vector<int> all{0, 1, 2, 3};
    EXPECT_FALSE(find_good_triple(uniform_coloring(4, Color::Red), all));
    EXPECT_THROW(find_good_triple(phi, std::vector<int>{0, 1}), Error);
}

TEST(GoodTriple, TwoOfEightColoringsOfATriangleAreGood) {
    int good = 0;
    for (std::uint64_t mask = 0; mask < 8; ++mask)
        good += find_good_triple(from_mask(3, mask), std::vector<int>{0, 1, 2}) ? 1 : 0;
    EXPECT_EQ(good, 2);
}

TEST(GoodTriple, AllColoringsOfFiveSetMatchOracle) {
    int bad = 0;
    const std::vector<int> all{0, 1, 2, 3, 4};
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
        const auto phi = from_mask(5, mask);
        const auto oc = to_oracle(phi);
        const auto t = find_good_triple(phi, all);
        std::optional<GoodTriple> expected;
        for (int a = 0; a < 5 && !expected; ++a)
            for (int b = a + 1; b < 5 && !expected; ++b)
                for (int c = b + 1; c < 5 && !expected; ++c)
                    if (oracle::good(oc, a, b, c)) expected = GoodTriple{a, b, c};
        ASSERT_EQ(t, expected) << "mask " << mask;
        bad += t ? 0 : 1;
    }
    EXPECT_EQ(bad, oracle::bad_colorings_of_5set());
}

TEST(Certify, SingleSubsetAndAllRed) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto phi = sample_coloring(6, seed);
        const auto r = certify_good_property(phi, 6, ExactMode{});
        const bool has = find_good_triple(phi, std::vector<int>{0, 1, 2, 3, 4, 5}).has_value();
        EXPECT_EQ(r.verdict == Verdict::Certified, has);
    }
    const auto r = certify_good_property(uniform_coloring(10, Color::Red), 5, ExactMode{});
    EXPECT_EQ(r.verdict, Verdict::Refuted);
    EXPECT_EQ(r.counterexample, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Certify, RefutationsRevalidate) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto phi = sample_coloring(14, seed);
        const auto r = certify_good_property(phi, 5, ExactMode{});
        if (r.verdict == Verdict::Refuted) EXPECT_FALSE(find_good_triple(phi, *r.counterexample));
        const auto s = certify_good_property(phi, 5, SampledMode{2000, seed});
        if (s.verdict == Verdict::Refuted) EXPECT_FALSE(find_good_triple(phi, *s.counterexample));
        EXPECT_EQ(s.checked <= 2000, true);
    }
}

TEST(Certify, ParameterErrors) {
    const auto phi = sample_coloring(30, 1);
    EXPECT_THROW(certify_good_property(phi, 2, ExactMode{}), Error);
    EXPECT_THROW(certify_good_property(phi, 31, ExactMode{}), Error);
    try {
        certify_good_property(phi, 15, ExactMode{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    }
}

TEST(Certify, BadCountMatchesScan) {
    const auto phi = sample_coloring(9, 2);
    std::uint64_t bad = 0;
    std::vector<int> idx{0, 1, 2, 3, 4};
    do {
        bad += find_good_triple(phi, idx) ? 0 : 1;
    } while (next_combination<int>(idx, 9));
    EXPECT_EQ(count_bad_subsets(phi, 5), bad);
}

TEST(Search, FindsCertifiedSmallColoring) {
    SearchOptions o;
    o.max_seeds = 8;
    o.repair_flips = 200000;
    const auto r = search_certified_coloring(7, 4, o);
    ASSERT_TRUE(r.coloring);
    EXPECT_EQ(certify_good_property(*r.coloring, 4, ExactMode{}).verdict, Verdict::Certified);
    const auto again = search_certified_coloring(7, 4, o);
    ASSERT_TRUE(again.coloring);
    EXPECT_EQ(*again.coloring, *r.coloring);
}

TEST(Search, GrowsFromCore) {
    SearchOptions o;
    o.max_seeds = 8;
    o.repair_flips = 50000;
    const auto core = search_certified_coloring(10, 5, o);
    ASSERT_TRUE(core.coloring);
    o.core = core.coloring;
    const auto r = search_certified_coloring(12, 5, o);
    ASSERT_TRUE(r.coloring);
    EXPECT_EQ(certify_good_property(*r.coloring, 5, ExactMode{}).verdict, Verdict::Certified);
    ASSERT_TRUE(r.closest);
    EXPECT_EQ(r.best_bad, 0u);

    // the first seed starts from the core; repair may touch it, the sample does not
    o.repair_flips = 0;
    o.max_seeds = 1;
    const auto start = search_certified_coloring(12, 5, o);
    ASSERT_TRUE(start.closest);
    for (int a = 0; a < 10; ++a)
        for (int b = a + 1; b < 10; ++b) EXPECT_EQ(start.closest->blue(a + 1, b + 1), core.coloring->blue(a, b));

    o.core = PairColoring(13);
    EXPECT_THROW(search_certified_coloring(12, 5, o), Error);
}

TEST(Bound, ZeroExponentIsBinomial) {
    EXPECT_NEAR(failure_probability_bound(10, 5, 0.0), 252.0, 1e-9);
    EXPECT_GT(failure_probability_bound(30, 6, 0.1), failure_probability_bound(30, 6, 0.2));
    EXPECT_THROW(failure_probability_bound(4, 5, 1.0), Error);
    EXPECT_THROW(failure_probability_bound(10, 5, -1.0), Error);
}

TEST(Bound, MatchesArbitraryPrecision) {
    EXPECT_NEAR(failure_probability_bound(10, 5, 1.0 / 12) / oracle::failure_bound_mpfr(10, 5, 1.0 / 12), 1.0, 1e-10);
    Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        const auto n = 3 + rng.below(30);
        const auto D = n + rng.below(200);
        const double c = 0.01 + rng.unit();
        const double got = failure_probability_bound(D, n, c), want = oracle::failure_bound_mpfr(D, n, c);
        EXPECT_NEAR(got / want, 1.0, 1e-10) << D << " " << n << " " << c;
    }
}

TEST(Serialization, RoundTripAndRejects) {
    const auto phi = sample_coloring(13, 42);
    const auto bytes = serialize_coloring(phi);
    EXPECT_EQ(bytes.rfind("STEPUP-PHI v1 D=13 seed=42\n", 0), 0U);
    EXPECT_EQ(bytes.size(), std::string("STEPUP-PHI v1 D=13 seed=42\n").size() + (78 + 7) / 8);
    EXPECT_EQ(parse_coloring(bytes), phi);
    EXPECT_EQ(certify_good_property(parse_coloring(bytes), 5, ExactMode{}).verdict,
              certify_good_property(phi, 5, ExactMode{}).verdict);

    EXPECT_THROW(parse_coloring(bytes.substr(0, bytes.size() - 1)), Error);
    EXPECT_THROW(parse_coloring("STEPUP-PHI v2 D=13 seed=42\n"), Error);
    auto padded = bytes;
    padded.back() = static_cast<char>(padded.back() | 0x80); // 78 pairs: bit 6 of the last byte is padding
    EXPECT_THROW(parse_coloring(padded), Error);
}

TEST(Serialization, BitLayout) {
    PairColoring phi(4);
    phi.set(0, 1, Color::Blue); // pair 0
    phi.set(2, 3, Color::Blue); // pair 5
    const auto bytes = serialize_coloring(phi);
    EXPECT_EQ(static_cast<unsigned char>(bytes.back()), 0b100001);
}
