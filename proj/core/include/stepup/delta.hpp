#pragma once

// Binary-representation machinery for the stepping-up construction.
//
// A vertex is an unsigned integer read as a bit string v = sum v(i) 2^i.
// delta(u, v) is the index of the most significant bit where u and v differ.
// For an increasing tuple <v_1, ..., v_r> the delta sequence is
// (delta(v_1, v_2), ..., delta(v_{r-1}, v_r)).

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stepup/error.hpp"

namespace stepup {

using Vertex = std::uint64_t;
using BitIndex = std::uint8_t;
using DeltaSeq = std::vector<BitIndex>;

inline constexpr int kMaxBits = 64;

enum class Extremum { LocalMin, LocalMax, LocalMonotone, Boundary };

enum class Direction { Increasing, Decreasing };

struct PropertyReport {
    bool pass = true;
    std::string failed_property; // empty on pass
    std::string detail;          // first counterexample, human readable
};

/// Unchecked delta for hot loops; u != v is the caller's responsibility.
inline BitIndex delta_unchecked(Vertex u, Vertex v) noexcept {
    return static_cast<BitIndex>(std::bit_width(u ^ v) - 1);
}

/// Most significant differing bit. Throws EqualVertices when u == v.
BitIndex delta(Vertex u, Vertex v);

/// Throws TupleTooShort (fewer than min_size entries) or MalformedTuple
/// (not strictly increasing).
void require_ordered(std::span<const Vertex> tuple, std::size_t min_size);

DeltaSeq delta_sequence(std::span<const Vertex> tuple);

/// Strict-comparison classification; endpoints are Boundary.
Extremum classify_position(std::span<const BitIndex> seq, std::size_t i);

/// delta(first, last). Also recomputes the maximum of the delta sequence
/// and throws std::logic_error if the two disagree.
BitIndex span_delta(std::span<const Vertex> tuple);

/// Direction of a strictly monotone sequence, or nullopt. Sequences of
/// length <= 1 count as Increasing.
std::optional<Direction> monotone_direction(std::span<const BitIndex> seq);

/// First interior index that is a strict local minimum or maximum.
std::optional<std::size_t> first_local_extremum(std::span<const BitIndex> seq);

/// Checks, on one increasing tuple: distinct consecutive deltas for every
/// triple (I), the span/max identity for every sub-range (II), the 4-tuple
/// rule "descent forbids repeat" (III), and, when the tuple's delta sequence
/// is monotone, that every 3- and 4-vertex subtuple stays monotone in the
/// same direction (IV).
PropertyReport check_stepping_properties(std::span<const Vertex> tuple);

std::string_view to_string(Extremum e) noexcept;
std::string_view to_string(Direction d) noexcept;

} // namespace stepup
