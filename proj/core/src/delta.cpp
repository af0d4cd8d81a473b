#include "stepup/delta.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace stepup {

namespace {

std::string describe(std::span<const Vertex> tuple) {
    std::ostringstream os;
    os << '<';
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) os << ',';
        os << tuple[i];
    }
    os << '>';
    return os.str();
}

PropertyReport fail(std::string property, std::string detail) {
    return {false, std::move(property), std::move(detail)};
}

} // namespace

BitIndex delta(Vertex u, Vertex v) {
    if (u == v) throw Error(ErrorCode::EqualVertices, "delta of a vertex with itself: " + std::to_string(u));
    return delta_unchecked(u, v);
}

void require_ordered(std::span<const Vertex> tuple, std::size_t min_size) {
    if (tuple.size() < min_size)
        throw Error(ErrorCode::TupleTooShort,
                    "need at least " + std::to_string(min_size) + " vertices, got " + std::to_string(tuple.size()));
    for (std::size_t i = 1; i < tuple.size(); ++i)
        if (tuple[i - 1] >= tuple[i]) throw Error(ErrorCode::MalformedTuple, "not strictly increasing: " + describe(tuple));
}

DeltaSeq delta_sequence(std::span<const Vertex> tuple) {
    require_ordered(tuple, 2);
    DeltaSeq out(tuple.size() - 1);
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i) out[i] = delta_unchecked(tuple[i], tuple[i + 1]);
    return out;
}

Extremum classify_position(std::span<const BitIndex> seq, std::size_t i) {
    if (i >= seq.size())
        throw Error(ErrorCode::PositionOutOfRange,
                    "position " + std::to_string(i) + " in sequence of length " + std::to_string(seq.size()));
    if (i == 0 || i + 1 == seq.size()) return Extremum::Boundary;
    const auto prev = seq[i - 1], cur = seq[i], next = seq[i + 1];
    if (prev > cur && cur < next) return Extremum::LocalMin;
    if (prev < cur && cur > next) return Extremum::LocalMax;
    return Extremum::LocalMonotone;
}

BitIndex span_delta(std::span<const Vertex> tuple) {
    const auto seq = delta_sequence(tuple);
    const BitIndex span = delta_unchecked(tuple.front(), tuple.back());
    if (span != *std::max_element(seq.begin(), seq.end()))
        throw std::logic_error("span delta differs from max of delta sequence on " + describe(tuple));
    return span;
}

std::optional<Direction> monotone_direction(std::span<const BitIndex> seq) {
    if (seq.size() <= 1) return Direction::Increasing;
    const bool up = seq[0] < seq[1];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] == seq[i + 1]) return std::nullopt;
        if ((seq[i] < seq[i + 1]) != up) return std::nullopt;
    }
    return up ? Direction::Increasing : Direction::Decreasing;
}

std::optional<std::size_t> first_local_extremum(std::span<const BitIndex> seq) {
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
        const auto c = classify_position(seq, i);
        if (c == Extremum::LocalMin || c == Extremum::LocalMax) return i;
    }
    return std::nullopt;
}

PropertyReport check_stepping_properties(std::span<const Vertex> tuple) {
    require_ordered(tuple, 3);
    const std::size_t r = tuple.size();
    auto d = [&](std::size_t i, std::size_t j) { return delta_unchecked(tuple[i], tuple[j]); };

    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            for (std::size_t k = j + 1; k < r; ++k)
                if (d(i, j) == d(j, k))
                    return fail("I", "delta repeats on " + describe(std::array{tuple[i], tuple[j], tuple[k]}));

    for (std::size_t i = 0; i < r; ++i) {
        BitIndex running = 0;
        for (std::size_t j = i + 1; j < r; ++j) {
            running = std::max(running, d(j - 1, j));
            if (d(i, j) != running)
                return fail("II", "span of " + describe(tuple.subspan(i, j - i + 1)) + " is not the max delta");
        }
    }

    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
            for (std::size_t c = b + 1; c < r; ++c)
                for (std::size_t e = c + 1; e < r; ++e)
                    if (d(a, b) > d(b, c) && d(a, b) == d(c, e))
                        return fail("III", "descent followed by repeat on " +
                                               describe(std::array{tuple[a], tuple[b], tuple[c], tuple[e]}));

    const auto seq = delta_sequence(tuple);
    if (const auto dir = monotone_direction(seq)) {
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = a + 1; b < r; ++b)
                for (std::size_t c = b + 1; c < r; ++c) {
                    const bool up = d(a, b) < d(b, c);
                    if (up != (*dir == Direction::Increasing))
                        return fail("IV", "subtuple " + describe(std::array{tuple[a], tuple[b], tuple[c]}) +
                                              " breaks monotonicity");
                    for (std::size_t e = c + 1; e < r; ++e)
                        if ((d(b, c) < d(c, e)) != up)
                            return fail("IV", "subtuple " +
                                                  describe(std::array{tuple[a], tuple[b], tuple[c], tuple[e]}) +
                                                  " breaks monotonicity");
                }
    }
    return {};
}

std::string_view to_string(Extremum e) noexcept {
    switch (e) {
    case Extremum::LocalMin: return "LocalMin";
    case Extremum::LocalMax: return "LocalMax";
    case Extremum::LocalMonotone: return "LocalMonotone";
    case Extremum::Boundary: return "Boundary";
    }
    return "?";
}

std::string_view to_string(Direction d) noexcept {
    return d == Direction::Increasing ? "Increasing" : "Decreasing";
}

} // namespace stepup
