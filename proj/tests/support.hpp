#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "stepup/delta.hpp"
#include "stepup/rng.hpp"

namespace testing_support {

// `size` distinct sorted vertices below 2^bits (size <= 2^bits).
inline std::vector<stepup::Vertex> random_tuple(stepup::Rng& rng, int bits, std::size_t size) {
    const std::uint64_t universe = std::uint64_t{1} << bits;
    std::vector<stepup::Vertex> v;
    while (v.size() < size) {
        v.push_back(rng.below(universe));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return v;
}

} // namespace testing_support
