#pragma once

// The stepped-up 4-graph H on {0, ..., 2^D - 1}. For an increasing 4-tuple
// with delta pattern (d1, d2, d3), membership is decided by the pattern's
// shape and the pair colors among d1, d2, d3:
//
//   RuleI   d1<d2<d3 or d1>d2>d3     phi(d1,d2) == phi(d2,d3) != phi(d1,d3)
//   RuleII  d1>d2<d3, d1>d3          phi(d1,d2) == phi(d1,d3) != phi(d2,d3)
//   RuleIII d1>d2<d3, d1<d3          phi(d1,d2) == phi(d1,d3) == phi(d2,d3)
//   None    d1<d2>d3                 never an edge
//
// Edges are never materialized.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "stepup/coloring.hpp"
#include "stepup/delta.hpp"

namespace stepup {

enum class EdgeRule { RuleI, RuleII, RuleIII, None };

struct EdgeClass {
    EdgeRule rule;
    bool is_edge;
};

/// Structural slot of a delta pattern. Consecutive deltas must differ, and in
/// the valley shape d1 != d3; violations throw std::logic_error since no
/// vertex tuple can produce them.
EdgeRule rule_slot(unsigned d1, unsigned d2, unsigned d3);

/// Slot plus the color condition of that slot.
EdgeClass classify_deltas(const PairColoring& phi, unsigned d1, unsigned d2, unsigned d3);

class StepUpHypergraph {
public:
    explicit StepUpHypergraph(PairColoring phi) : phi_(std::move(phi)) {}

    int bits() const noexcept { return phi_.size(); }
    const PairColoring& coloring() const noexcept { return phi_; }

    bool contains(Vertex v) const noexcept { return bits() >= kMaxBits || (v >> bits()) == 0; }

    /// 2^D, saturating at UINT64_MAX for D = 64.
    std::uint64_t vertex_count() const noexcept {
        return bits() >= kMaxBits ? UINT64_MAX : (std::uint64_t{1} << bits());
    }

private:
    PairColoring phi_;
};

/// A 4-set of H together with the evidence that decided its membership.
struct Edge {
    std::array<Vertex, 4> vertices{};
    EdgeRule rule = EdgeRule::None;
    std::array<BitIndex, 3> deltas{};
};

/// e must be strictly increasing and inside the vertex set (MalformedTuple).
EdgeClass classify_4tuple(const StepUpHypergraph& h, std::span<const Vertex, 4> e);

/// Any order; four distinct vertices of H required (MalformedTuple).
bool is_edge(const StepUpHypergraph& h, std::span<const Vertex, 4> e);

/// Sorted copy of e with its rule and deltas.
Edge describe_4set(const StepUpHypergraph& h, std::span<const Vertex, 4> e);

/// Precomputed membership of every delta pattern (d1, d2, d3) with
/// d1, d2, d3 < D. The K5 checker runs off this table, which also lets tests
/// plug in a deliberately wrong predicate.
class EdgeTable {
public:
    explicit EdgeTable(const PairColoring& phi);
    EdgeTable(int bits, const std::function<bool(unsigned, unsigned, unsigned)>& predicate);

    int bits() const noexcept { return bits_; }
    bool operator()(unsigned d1, unsigned d2, unsigned d3) const noexcept {
        return table_[(d1 * bits_ + d2) * bits_ + d3] != 0;
    }

private:
    int bits_;
    std::vector<std::uint8_t> table_;
};

struct FiveSetViolation {
    std::array<Vertex, 5> vertices;
    std::string note;
};

inline constexpr std::uint64_t kDefaultFiveSetCap = 5'000'000'000ULL;
inline constexpr std::uint64_t kDefaultFourSetCap = 100'000'000ULL;

struct K5Options {
    std::optional<std::uint64_t> vertex_cap; // enumerate {0, ..., cap-1}; default 2^D
    std::uint64_t five_set_cap = kDefaultFiveSetCap;
    bool force = false;                      // ignore five_set_cap
    unsigned threads = 1;
    std::stop_token stop;                    // checked between shards
};

struct K5Result {
    std::optional<FiveSetViolation> violation; // lexicographically first
    std::uint64_t vertices = 0;
    std::uint64_t five_sets = 0;   // five-sets covered (checked or pruned by a non-edge prefix)
    std::uint64_t shards = 0;      // leading pairs (a, b)
    bool cancelled = false;
};

/// Exhaustive search for five vertices all of whose 4-subsets are edges.
/// Sharded over leading pairs; the result does not depend on `threads`.
/// Throws BudgetExceeded if binom(cap, 5) exceeds five_set_cap without force.
K5Result check_k5_free(const StepUpHypergraph& h, const K5Options& options = {});
K5Result check_k5_free(const EdgeTable& table, const K5Options& options = {});

/// Some 4-subset of P that is not an edge, scanning 4-subsets in
/// lexicographic order. Throws NoNonEdge (never expected) with the 5-set.
std::array<Vertex, 4> find_nonedge_in_5set(const StepUpHypergraph& h, std::span<const Vertex, 5> p);

/// First edge (lexicographic over sorted Q) inside Q, or nullopt if Q is
/// independent. Throws SetTooSmall for |Q| < 4, MalformedTuple on duplicates
/// or foreign vertices, BudgetExceeded if binom(|Q|, 4) > cap.
std::optional<Edge> is_independent(const StepUpHypergraph& h, std::span<const Vertex> q,
                                   std::uint64_t cap = kDefaultFourSetCap);

struct AlphaResult {
    std::uint64_t alpha = 0;
    std::vector<Vertex> witness; // one maximum independent set, increasing
    std::uint64_t nodes = 0;     // search nodes (subsets for the bitmask method)
};

/// Exact independence number of H: bitmask exhaustion for D <= 4,
/// branch-and-bound for larger D. Throws BudgetExceeded for D > max_bits.
AlphaResult exact_alpha(const StepUpHypergraph& h, int max_bits = 5);

std::string_view to_string(EdgeRule r) noexcept;

} // namespace stepup
