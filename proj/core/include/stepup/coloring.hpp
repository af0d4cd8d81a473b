#pragma once

// Red/blue colorings of the pairs of {0, ..., D-1} and the "good triple"
// property: a < b < c is good when color(a,b) == color(b,c) != color(a,c).
// A coloring is certified for n when every n-subset contains a good triple.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stepup/delta.hpp"

namespace stepup {

enum class Color : std::uint8_t { Red = 0, Blue = 1 };

class PairColoring {
public:
    /// All pairs Red. Throws InvalidD unless 2 <= size <= 64.
    explicit PairColoring(int size, std::uint64_t seed = 0);

    int size() const noexcept { return size_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t pair_count() const noexcept { return static_cast<std::size_t>(size_) * (size_ - 1) / 2; }

    /// Checked lookup; throws InvalidParams for a == b or out-of-range values.
    Color color(int a, int b) const;
    void set(int a, int b, Color c);
    void flip(int a, int b);

    /// Unchecked symmetric lookup for hot loops.
    bool blue(unsigned a, unsigned b) const noexcept { return (rows_[a] >> b) & 1U; }

    friend bool operator==(const PairColoring&, const PairColoring&) = default;

private:
    int size_;
    std::uint64_t seed_;
    std::array<std::uint64_t, kMaxBits> rows_{};
};

/// Each pair independently uniform, deterministic in (size, seed).
PairColoring sample_coloring(int size, std::uint64_t seed);

PairColoring uniform_coloring(int size, Color c);

struct GoodTriple {
    int a, b, c;
    friend bool operator==(const GoodTriple&, const GoodTriple&) = default;
};

inline bool is_good_triple(const PairColoring& phi, unsigned a, unsigned b, unsigned c) noexcept {
    const bool ab = phi.blue(a, b), bc = phi.blue(b, c), ac = phi.blue(a, c);
    return ab == bc && bc != ac;
}

/// Lexicographically first good triple of the given value set, if any.
/// Values may be given in any order. Throws SetTooSmall if fewer than 3
/// values, InvalidParams on duplicates or values outside [0, size).
std::optional<GoodTriple> find_good_triple(const PairColoring& phi, std::span<const int> values);

struct ExactMode {};
struct SampledMode {
    std::uint64_t trials;
    std::uint64_t seed;
};
using CertificationMode = std::variant<ExactMode, SampledMode>;

enum class Verdict { Certified, Refuted, Estimated };

struct CertificationResult {
    Verdict verdict = Verdict::Certified;
    std::optional<std::vector<int>> counterexample; // an n-set with no good triple
    std::uint64_t checked = 0;                      // subsets examined
    std::uint64_t total = 0;                        // binom(D, n), saturating
};

inline constexpr std::uint64_t kDefaultExactCap = 10'000'000;

/// Exact mode enumerates every n-subset in lexicographic order and stops at
/// the first one without a good triple. Sampled mode draws `trials` uniform
/// n-subsets. Throws InvalidN unless 3 <= n <= D, BudgetExceeded if Exact
/// would need more than `exact_cap` subsets.
CertificationResult certify_good_property(const PairColoring& phi, int n, const CertificationMode& mode,
                                          std::uint64_t exact_cap = kDefaultExactCap);

/// Number of n-subsets without a good triple (exhaustive).
std::uint64_t count_bad_subsets(const PairColoring& phi, int n, std::uint64_t exact_cap = kDefaultExactCap);

struct SearchOptions {
    std::uint64_t first_seed = 1;
    std::uint64_t max_seeds = 64;
    /// Per-seed budget of single-pair flips spent repairing bad subsets after
    /// sampling; 0 means pure sampling.
    std::uint64_t repair_flips = 2'000'000;
    std::uint64_t exact_cap = kDefaultExactCap;
    /// Warm start: a smaller coloring copied onto the middle vertices of every
    /// sampled coloring; the new vertices are split between the two ends.
    std::optional<PairColoring> core;
};

struct SearchResult {
    std::optional<PairColoring> coloring; // set when certified
    std::optional<PairColoring> closest;  // fewest bad subsets seen over all seeds
    std::uint64_t seeds_tried = 0;
    std::uint64_t flips = 0;               // flips spent on the winning seed
    std::uint64_t best_bad = 0;            // fewest bad subsets seen (0 on success)
};

/// For seed = first_seed, first_seed + 1, ...: sample a coloring, repair it
/// by a focused walk over the bad n-subsets (each step flips one pair inside
/// a random bad subset, mostly the one that removes the most), and stop at
/// the first seed whose coloring certifies in Exact mode. With a core, only
/// pairs touching the new vertices start random.
SearchResult search_certified_coloring(int size, int n, const SearchOptions& options = {});

/// binom(D, n) * (3/4)^(c' n^2), computed in log space. The natural log is
/// returned by the first function; the second exponentiates (and may be +inf).
double log_failure_probability_bound(std::uint64_t D, std::uint64_t n, double c_prime);
double failure_probability_bound(std::uint64_t D, std::uint64_t n, double c_prime);

// Coloring file: "STEPUP-PHI v1 D=<D> seed=<seed>\n" followed by
// ceil(binom(D,2)/8) bytes. Pairs (a,b), a<b, in lexicographic order; pair k
// is bit (k % 8) of byte k / 8; Red = 0, Blue = 1.
std::string serialize_coloring(const PairColoring& phi);
PairColoring parse_coloring(std::string_view bytes);
void save_coloring(const PairColoring& phi, const std::filesystem::path& path);
PairColoring load_coloring(const std::filesystem::path& path);

std::string_view to_string(Color c) noexcept;
std::string_view to_string(Verdict v) noexcept;

} // namespace stepup
