#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace stepup {

/// Partial Steiner (n,3,2)-system: triples on [0, n), each pair covered at
/// most once.
struct SteinerSystem {
    int n = 0;
    std::vector<std::array<int, 3>> triples;
};

/// Greedy packing over a seeded random order of all triples: a triple is
/// accepted iff none of its three pairs is already used. When the scan ends
/// the unused pairs form a triangle-free graph, so at least n(n-2)/12
/// triples are accepted. Throws InvalidN for n < 3.
SteinerSystem greedy_steiner(int n, std::uint64_t seed);

/// True iff every pair of ground elements lies in at most one triple and
/// every triple has three distinct in-range elements.
bool is_pair_disjoint(const SteinerSystem& s);

} // namespace stepup
