#include "stepup/steiner.hpp"

#include <algorithm>

#include "stepup/error.hpp"
#include "stepup/rng.hpp"

namespace stepup {

SteinerSystem greedy_steiner(int n, std::uint64_t seed) {
    if (n < 3) throw Error(ErrorCode::InvalidN, "Steiner packing needs n >= 3, got " + std::to_string(n));

    std::vector<std::array<int, 3>> order;
    order.reserve(static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 6);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) order.push_back({a, b, c});

    Rng rng(derive_seed(seed, "steiner"));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    SteinerSystem out{n, {}};
    std::vector<std::uint8_t> used(static_cast<std::size_t>(n) * n, 0);
    auto slot = [n](int x, int y) { return static_cast<std::size_t>(x) * n + y; };
    for (const auto& [a, b, c] : order) {
        if (used[slot(a, b)] || used[slot(b, c)] || used[slot(a, c)]) continue;
        used[slot(a, b)] = used[slot(b, c)] = used[slot(a, c)] = 1;
        out.triples.push_back({a, b, c});
    }
    std::sort(out.triples.begin(), out.triples.end());
    return out;
}

bool is_pair_disjoint(const SteinerSystem& s) {
    if (s.n < 0) return false;
    std::vector<std::uint8_t> used(static_cast<std::size_t>(s.n) * s.n, 0);
    for (auto t : s.triples) {
        std::sort(t.begin(), t.end());
        if (t[0] < 0 || t[2] >= s.n || t[0] == t[1] || t[1] == t[2]) return false;
        for (auto [x, y] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[0], t[2]}}) {
            auto& u = used[static_cast<std::size_t>(x) * s.n + y];
            if (u) return false;
            u = 1;
        }
    }
    return true;
}

} // namespace stepup
