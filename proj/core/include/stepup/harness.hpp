#pragma once

// Command dispatch shared by the CLI and the tests. A run produces an exit
// status and a JSON report of the form
//
//   {"command": ..., "config": {...}, "result": {...}, "timings": {...}}
//
// where "result" is a pure function of "config" (thread count included) and
// "timings" holds everything that is not.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "stepup/delta.hpp"
#include "stepup/report.hpp"

namespace stepup {

enum class Command { GenColoring, VerifyColoring, CheckK5, Alpha, Independent, ExtractWitness, Steiner, Bound, Bench };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    Command command = Command::Bound;
    int bits = 0;   // D; 0 = take it from the coloring file
    int n = 5;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> coloring_path; // input, or output for gen-coloring
    std::optional<std::filesystem::path> q_path;
    std::optional<std::uint64_t> q_seed;
    std::optional<std::uint64_t> q_size; // default (2n)^7 + 1, clipped to 2^D
    std::optional<std::filesystem::path> save_q; // extract-witness: persist the generated Q
    std::vector<Vertex> vertices;        // explicit set for `independent`
    std::optional<std::uint64_t> cap;    // command budget; module default when absent
    unsigned threads = 1;
    bool force = false;

    // gen-coloring
    bool certify = false;
    std::uint64_t max_seeds = 64;
    std::uint64_t repair_flips = 2'000'000;
    std::optional<std::filesystem::path> core_path; // warm-start coloring

    // verify-coloring
    bool sampled = false;
    std::uint64_t trials = 1'000'000;

    // check-k5
    bool all_colorings = false;
    std::uint64_t colorings = 1;
    std::optional<std::uint64_t> vertex_cap;

    // bound
    double c_prime = 1.0;
};

struct RunResult {
    int exit_code = kExitOk;
    Json report;
    std::string csv; // bench only
};

/// Never throws for domain errors: they become exit 1 (extraction failure)
/// or exit 2 (usage / I/O) with an "error" entry in the report.
RunResult run(const RunConfig& config, std::stop_token stop = {});

std::string_view to_string(Command c) noexcept;
std::optional<Command> command_from_string(std::string_view name) noexcept;

Json config_to_json(const RunConfig& config);
/// Inverse of config_to_json; missing keys keep their defaults.
RunConfig config_from_json(const Json& j);

/// STEPUP_THREADS if set to a positive integer, else 1.
unsigned default_threads();

/// Fixed column set of the bench CSV.
inline constexpr const char* kBenchCsvHeader = "kind,bits,n,threads,items,seconds,items_per_second,verdict";

} // namespace stepup
