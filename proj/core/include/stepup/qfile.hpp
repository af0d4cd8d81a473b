#pragma once

// Vertex-set files: "STEPUP-Q v1 count=<m> bits=<D>\n" followed by m
// little-endian uint64 vertices in strictly increasing order.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stepup/delta.hpp"

namespace stepup {

/// m distinct vertices drawn uniformly from [0, 2^bits), sorted. Uses a
/// bitmap when bits <= 30, sort-and-top-up otherwise. Throws InvalidParams
/// if m exceeds 2^bits or bits is outside [1, 63].
std::vector<Vertex> generate_q(std::uint64_t seed, std::uint64_t m, int bits);

std::string serialize_q(const std::vector<Vertex>& q, int bits);
/// Validates header, body length, ordering, and range (IoError / MalformedTuple).
std::vector<Vertex> parse_q(std::string_view bytes, int* bits = nullptr);

void save_q(const std::vector<Vertex>& q, int bits, const std::filesystem::path& path);
std::vector<Vertex> load_q(const std::filesystem::path& path, int* bits = nullptr);

} // namespace stepup
