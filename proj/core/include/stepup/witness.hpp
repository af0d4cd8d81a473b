#pragma once

// Constructive edge finder for large vertex sets. Given an increasing vertex
// set Q = <v_0, ..., v_{m-1}> with delta sequence delta_0, ..., delta_{m-2},
// repeatedly keep the strict local maxima of the previous layer:
//
//   layer 0 = every position, layer t = strict local maxima of layer t-1.
//
// Consecutive entries a < b of a layer dominate everything between them
// (delta_x < max(delta_a, delta_b) for a < x < b), which pins the delta
// pattern of 4-tuples built from layer positions and their successors. A
// strictly monotone run of n consecutive layer entries is turned into a
// rule (i) edge through a good triple of the coloring; otherwise a chain of
// anchors taken from the seven layers yields a short list of candidate
// 4-tuples, one of which is always an edge.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stepup/coloring.hpp"
#include "stepup/hypergraph.hpp"

namespace stepup {

inline constexpr int kLayerDepth = 7;

using Position = std::uint32_t;

class LayerStack {
public:
    LayerStack(DeltaSeq deltas, int n);

    std::size_t vertex_count() const noexcept { return deltas_.size() + 1; }
    int run_length() const noexcept { return n_; }
    const DeltaSeq& deltas() const noexcept { return deltas_; }
    BitIndex delta_at(Position p) const { return deltas_.at(p); }

    std::size_t depth() const noexcept { return layers_.size(); }
    const std::vector<Position>& layer(std::size_t t) const { return layers_.at(t); }

    /// (m - 1) / (2n)^t, the per-layer size target.
    double beta(std::size_t t) const;

    bool contains(std::size_t t, Position p) const;
    /// Highest layer containing p.
    std::size_t level(Position p) const;
    /// Closest layer-t entry strictly left / right of p.
    std::optional<Position> left_neighbor(std::size_t t, Position p) const;
    std::optional<Position> right_neighbor(std::size_t t, Position p) const;

    void push_layer(std::vector<Position> layer) { layers_.push_back(std::move(layer)); }
    /// Direct access for tests that need to corrupt a stack.
    DeltaSeq& mutable_deltas() noexcept { return deltas_; }

private:
    DeltaSeq deltas_;
    int n_;
    std::vector<std::vector<Position>> layers_;
};

struct MonotoneRun {
    std::size_t layer = 0;
    std::vector<Position> positions; // consecutive entries of that layer
    Direction direction = Direction::Increasing;
};

struct LayerBuild {
    LayerStack stack;
    std::optional<MonotoneRun> run; // set when the build stopped at a run
};

/// Carries a JSON dump of the extractor state alongside the error code.
class ExtractorError : public Error {
public:
    ExtractorError(ErrorCode code, const std::string& what, std::string trace)
        : Error(code, what), trace_(std::move(trace)) {}
    const std::string& trace() const noexcept { return trace_; }

private:
    std::string trace_;
};

/// Builds layers 1..7, stopping early at the first layer that contains n
/// consecutive strictly monotone entries. Throws TupleTooShort for |Q| < 2,
/// InvalidN for n < 3, and InsufficientLayers (ExtractorError) when a layer
/// comes out empty.
LayerBuild build_layers(std::span<const Vertex> q, int n);

struct AnchorPoint {
    Position position = 0;
    std::size_t layer = 0; // layer the anchor was drawn from
    BitIndex delta = 0;
};

struct Anchors {
    AnchorPoint a, b1, b2, b3;
    AnchorPoint B1, B3; // the pigeonhole pair (b_i, b_j)
    AnchorPoint c, d, e, f;
    std::pair<int, int> pigeonhole{0, 0};
};

/// Anchor chain over a full 7-layer stack: a is the first top-layer entry,
/// b1 its left neighbor one layer down, b2 and b3 successive right neighbors
/// further down; (B1, B3) is the first of (b1,b3), (b1,b2), (b2,b3) whose
/// colors against a agree; c, d, e, f alternate left/right neighbors below B3.
/// Throws InsufficientLayers when a lookup fails, ProofGapTrap when an
/// ordering invariant does not hold.
Anchors select_anchors(const LayerStack& stack, const PairColoring& phi);

enum class Branch { MonotoneRun, AnchorChain, SmallSetScan };

struct CandidateCheck {
    std::string label;
    std::array<std::size_t, 4> indices{}; // indices into Q, as listed
    bool skipped = false;                 // repeated index
    bool is_edge = false;
    EdgeRule rule = EdgeRule::None;
};

struct EdgeWitness {
    Edge edge;
    std::array<std::size_t, 4> q_indices{}; // increasing
    Branch branch = Branch::SmallSetScan;
    std::optional<MonotoneRun> run;
    std::optional<GoodTriple> good_triple;
    std::optional<Anchors> anchors;
    std::vector<CandidateCheck> candidates;
    std::optional<std::size_t> candidate_index;
    std::vector<std::size_t> layer_sizes;
    std::vector<double> beta;
};

/// Maps a monotone run to a rule (i) edge through a good triple of its delta
/// values: increasing run, triple at p<q<r -> (v_p, v_{p+1}, v_{q+1}, v_{r+1});
/// decreasing run -> (v_p, v_q, v_r, v_{r+1}). Throws NoGoodTripleInRun when
/// the coloring has no good triple on the run's values.
EdgeWitness edge_from_monotone_run(const StepUpHypergraph& h, std::span<const Vertex> q, const LayerStack& stack,
                                   const MonotoneRun& run);

struct ExtractOptions {
    /// Fallback exhaustive scan when the layered search cannot complete on a
    /// small Q, allowed while binom(|Q|, 4) stays below this.
    std::uint64_t small_set_cap = 1'000'000;
};

/// Q must be strictly increasing inside H. The guarantee applies once
/// |Q| >= (2n)^7 + 1 and the coloring is certified for n; below that the
/// search is best-effort and ends in NeedMoreVertices if nothing is found.
EdgeWitness extract_edge(const StepUpHypergraph& h, std::span<const Vertex> q, int n,
                         const ExtractOptions& options = {});

/// (2n)^7 + 1, saturating.
std::uint64_t guaranteed_size(int n) noexcept;

/// Nesting, strict-local-maximum membership, the domination property for
/// consecutive layer entries, and the neighbor-window bound for every entry
/// of layer t >= 1 against its neighbors in layer t-1.
PropertyReport verify_star_property(const LayerStack& stack);

std::string_view to_string(Branch b) noexcept;

} // namespace stepup
