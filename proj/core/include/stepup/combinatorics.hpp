#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace stepup {

/// binom(n, k), saturating at UINT64_MAX.
constexpr std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        // r * num / i is exact at every step; guard the intermediate product.
        const unsigned __int128 wide = static_cast<unsigned __int128>(r) * num / i;
        if (wide > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
        r = static_cast<std::uint64_t>(wide);
    }
    return r;
}

/// Advances idx (strictly increasing, values < universe) to the next
/// combination in lexicographic order. Returns false after the last one.
template <typename T>
bool next_combination(std::span<T> idx, T universe) noexcept {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (idx[i] != static_cast<T>(universe - k + i)) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = static_cast<T>(idx[j - 1] + 1);
            return true;
        }
    }
    return false;
}

} // namespace stepup
