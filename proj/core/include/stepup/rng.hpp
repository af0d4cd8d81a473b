#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stepup {

/// Derives an independent stream seed from a master seed and a task label,
/// so that each logical consumer (coloring, Q generation, Steiner order, ...)
/// draws from its own stream regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0) noexcept;

/// mt19937_64 with a portable bounded draw (the standard distributions are
/// implementation-defined, which would break cross-platform reproducibility).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    bool coin() { return (engine_() >> 63) != 0; }

    /// Uniform in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace stepup
