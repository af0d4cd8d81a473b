#include "stepup/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <sstream>

#include "stepup/coloring.hpp"
#include "stepup/hypergraph.hpp"
#include "stepup/qfile.hpp"
#include "stepup/rng.hpp"
#include "stepup/steiner.hpp"
#include "stepup/witness.hpp"

namespace stepup {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 9> kCommandNames{{
    {Command::GenColoring, "gen-coloring"},
    {Command::VerifyColoring, "verify-coloring"},
    {Command::CheckK5, "check-k5"},
    {Command::Alpha, "alpha"},
    {Command::Independent, "independent"},
    {Command::ExtractWitness, "extract-witness"},
    {Command::Steiner, "steiner"},
    {Command::Bound, "bound"},
    {Command::Bench, "bench"},
}};

constexpr int kAllColoringsMaxPairs = 21;
constexpr int kBenchQBits = 24;
constexpr std::uint64_t kBenchQSize = 1'000'000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::UsageError, what); }

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string fingerprint(const PairColoring& phi) { return hex64(derive_seed(0, serialize_coloring(phi))); }

Json coloring_info(const PairColoring& phi, std::string_view source) {
    return Json{{"source", source}, {"bits", phi.size()}, {"seed", phi.seed()}, {"fingerprint", fingerprint(phi)}};
}

// Coloring from --coloring, else sampled from --seed at --bits.
std::pair<PairColoring, Json> input_coloring(const RunConfig& c) {
    if (c.coloring_path) {
        auto phi = load_coloring(*c.coloring_path);
        if (c.bits != 0 && c.bits != phi.size())
            usage("--bits " + std::to_string(c.bits) + " does not match the coloring file (D = " +
                  std::to_string(phi.size()) + ")");
        return {phi, coloring_info(phi, "file")};
    }
    if (c.bits == 0) usage("need --bits or --coloring");
    auto phi = sample_coloring(c.bits, c.seed);
    return {phi, coloring_info(phi, "sampled")};
}

bool contains_sorted(const std::vector<Vertex>& q, Vertex v) { return std::binary_search(q.begin(), q.end(), v); }

struct Outcome {
    int exit_code = kExitOk;
    Json result = Json::object();
    Json timings = Json::object();
    std::string csv;
};

Outcome gen_coloring(const RunConfig& c) {
    if (c.bits == 0) usage("gen-coloring needs --bits");
    Outcome out;
    const auto t0 = Clock::now();
    std::optional<PairColoring> phi;
    if (c.certify) {
        SearchOptions opts;
        opts.first_seed = c.seed;
        opts.max_seeds = c.max_seeds;
        opts.repair_flips = c.repair_flips;
        opts.exact_cap = c.cap.value_or(kDefaultExactCap);
        if (c.core_path) opts.core = load_coloring(*c.core_path);
        const auto found = search_certified_coloring(c.bits, c.n, opts);
        out.result["search"] = Json{{"seeds_tried", found.seeds_tried},
                                    {"flips", found.flips},
                                    {"best_bad", found.best_bad},
                                    {"certified", found.coloring.has_value()}};
        phi = found.coloring;
    } else {
        phi = sample_coloring(c.bits, c.seed);
    }
    out.timings["search_seconds"] = seconds_since(t0);
    if (!phi) {
        out.exit_code = kExitFailure;
        out.result["coloring"] = nullptr;
        return out;
    }
    out.result["coloring"] = coloring_info(*phi, c.certify ? "search" : "sampled");
    if (c.coloring_path) save_coloring(*phi, *c.coloring_path);
    return out;
}

Outcome verify_coloring(const RunConfig& c) {
    auto [phi, info] = input_coloring(c);
    Outcome out;
    const CertificationMode mode =
        c.sampled ? CertificationMode{SampledMode{c.trials, c.seed}} : CertificationMode{ExactMode{}};
    const auto t0 = Clock::now();
    const auto cert = certify_good_property(phi, c.n, mode, c.cap.value_or(kDefaultExactCap));
    out.timings["certify_seconds"] = seconds_since(t0);
    out.result["coloring"] = info;
    out.result["mode"] = c.sampled ? "Sampled" : "Exact";
    out.result["certification"] = to_json(cert);
    if (cert.counterexample) out.result["counterexample_revalidated"] = !find_good_triple(phi, *cert.counterexample);
    out.exit_code = cert.verdict == Verdict::Refuted ? kExitFailure : kExitOk;
    return out;
}

K5Options k5_options(const RunConfig& c, std::stop_token stop, unsigned threads) {
    K5Options o;
    o.vertex_cap = c.vertex_cap;
    o.five_set_cap = c.cap.value_or(kDefaultFiveSetCap);
    o.force = c.force;
    o.threads = threads;
    o.stop = std::move(stop);
    return o;
}

Outcome check_k5(const RunConfig& c, std::stop_token stop) {
    std::vector<std::pair<PairColoring, Json>> work;
    if (c.all_colorings) {
        if (c.bits < 2) usage("--all-colorings needs --bits >= 2");
        const int pairs = c.bits * (c.bits - 1) / 2;
        if (pairs > kAllColoringsMaxPairs) usage("--all-colorings is limited to D <= 7");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
            PairColoring phi(c.bits, mask);
            int k = 0;
            for (int a = 0; a < c.bits; ++a)
                for (int b = a + 1; b < c.bits; ++b, ++k)
                    if ((mask >> k) & 1U) phi.set(a, b, Color::Blue);
            work.emplace_back(phi, Json{{"mask", mask}, {"fingerprint", fingerprint(phi)}});
        }
    } else if (c.coloring_path || c.colorings <= 1) {
        work.push_back(input_coloring(c));
    } else {
        if (c.bits == 0) usage("check-k5 needs --bits");
        for (std::uint64_t i = 0; i < c.colorings; ++i) {
            auto phi = sample_coloring(c.bits, derive_seed(c.seed, "k5-coloring", i));
            work.emplace_back(phi, coloring_info(phi, "sampled"));
        }
    }

    Outcome out;
    Json runs = Json::array();
    std::uint64_t total = 0, violations = 0;
    bool cancelled = false;
    const auto t0 = Clock::now();
    for (auto& [phi, info] : work) {
        const StepUpHypergraph h(phi);
        const auto r = check_k5_free(h, k5_options(c, stop, c.threads));
        total += r.five_sets;
        violations += r.violation ? 1 : 0;
        cancelled = cancelled || r.cancelled;
        Json entry = to_json(r, h);
        entry["coloring"] = info;
        runs.push_back(std::move(entry));
        if (r.cancelled) break;
    }
    const double secs = seconds_since(t0);
    out.timings["check_seconds"] = secs;
    out.timings["five_sets_per_second"] = secs > 0 ? static_cast<double>(total) / secs : 0.0;
    out.result["colorings"] = runs.size();
    out.result["five_sets_total"] = total;
    out.result["violations"] = violations;
    out.result["cancelled"] = cancelled;
    out.result["runs"] = std::move(runs);
    out.exit_code = violations == 0 && !cancelled ? kExitOk : kExitFailure;
    return out;
}

Outcome alpha(const RunConfig& c) {
    auto [phi, info] = input_coloring(c);
    const StepUpHypergraph h(phi);
    Outcome out;
    const auto t0 = Clock::now();
    const auto r = exact_alpha(h, c.force ? 6 : 5);
    out.timings["alpha_seconds"] = seconds_since(t0);
    out.result["coloring"] = info;
    out.result["alpha"] = to_json(r);
    out.result["witness_independent"] = r.witness.size() < 4 || !is_independent(h, r.witness);
    return out;
}

std::vector<Vertex> input_vertices(const RunConfig& c) {
    if (c.q_path) return load_q(*c.q_path);
    if (!c.vertices.empty()) {
        auto q = c.vertices;
        std::sort(q.begin(), q.end());
        if (std::adjacent_find(q.begin(), q.end()) != q.end())
            throw Error(ErrorCode::MalformedTuple, "duplicate vertices in the input set");
        return q;
    }
    if (!c.q_seed) usage("need --q, --vertices, or --q-seed");
    const std::uint64_t size = c.q_size.value_or(guaranteed_size(c.n));
    const std::uint64_t universe = std::uint64_t{1} << c.bits;
    return generate_q(*c.q_seed, c.q_size ? size : std::min(size, universe), c.bits);
}

Outcome independent(const RunConfig& c) {
    auto [phi, info] = input_coloring(c);
    const StepUpHypergraph h(phi);
    const auto q = input_vertices(c);
    Outcome out;
    const auto t0 = Clock::now();
    const auto edge = is_independent(h, q, c.cap.value_or(kDefaultFourSetCap));
    out.timings["scan_seconds"] = seconds_since(t0);
    out.result["coloring"] = info;
    out.result["size"] = q.size();
    out.result["independent"] = !edge;
    out.result["edge"] = edge ? to_json(*edge, phi) : Json(nullptr);
    out.exit_code = edge ? kExitFailure : kExitOk;
    return out;
}

Outcome extract_witness(const RunConfig& c) {
    auto [phi, info] = input_coloring(c);
    const StepUpHypergraph h(phi);
    RunConfig qc = c;
    qc.bits = phi.size();
    if (!c.q_path && c.vertices.empty() && !c.q_seed) qc.q_seed = c.seed;
    const auto t0 = Clock::now();
    const auto q = input_vertices(qc);
    if (c.save_q) save_q(q, qc.bits, *c.save_q);
    Outcome out;
    out.timings["q_seconds"] = seconds_since(t0);
    out.result["coloring"] = info;
    out.result["q_size"] = q.size();
    out.result["guaranteed_size"] = guaranteed_size(c.n);

    const auto t1 = Clock::now();
    try {
        const auto w = extract_edge(h, q, c.n);
        out.timings["extract_seconds"] = seconds_since(t1);
        const auto& vs = w.edge.vertices;
        const bool in_q = std::all_of(vs.begin(), vs.end(), [&](Vertex v) { return contains_sorted(q, v); });
        const bool valid = is_edge(h, vs);
        out.result["witness"] = to_json(w, phi);
        out.result["validated"] = Json{{"is_edge", valid}, {"in_q", in_q}};
        out.exit_code = valid && in_q ? kExitOk : kExitFailure;
    } catch (const ExtractorError& err) {
        out.timings["extract_seconds"] = seconds_since(t1);
        out.result["witness"] = nullptr;
        out.result["failure"] = Json{{"code", to_string(err.code())}, {"message", err.what()},
                                     {"trace", Json::parse(err.trace(), nullptr, false)}};
        out.exit_code = kExitFailure;
    }
    return out;
}

Outcome steiner(const RunConfig& c) {
    Outcome out;
    const auto s = greedy_steiner(c.n, c.seed);
    const bool disjoint = is_pair_disjoint(s);
    const auto floor_bound = static_cast<double>(c.n) * (c.n - 2) / 12.0;
    const bool meets = static_cast<double>(s.triples.size()) >= floor_bound;
    out.result["steiner"] = to_json(s);
    out.result["lower_bound"] = floor_bound;
    out.result["meets_lower_bound"] = meets;
    out.exit_code = disjoint && meets ? kExitOk : kExitFailure;
    return out;
}

Outcome bound(const RunConfig& c) {
    if (c.bits <= 0) usage("bound needs --bits");
    Outcome out;
    const auto D = static_cast<std::uint64_t>(c.bits), n = static_cast<std::uint64_t>(c.n);
    out.result["log_bound"] = log_failure_probability_bound(D, n, c.c_prime);
    out.result["bound"] = failure_probability_bound(D, n, c.c_prime);
    out.result["below_one"] = log_failure_probability_bound(D, n, c.c_prime) < 0;
    return out;
}

Outcome bench(const RunConfig& c, std::stop_token stop) {
    Outcome out;
    const int bits = c.bits == 0 ? 6 : c.bits;
    const auto phi = sample_coloring(bits, c.seed);
    const StepUpHypergraph h(phi);

    std::vector<unsigned> thread_counts{1};
    for (unsigned t = 2; t < c.threads; t *= 2) thread_counts.push_back(t);
    if (c.threads > 1) thread_counts.push_back(c.threads);

    std::ostringstream csv;
    csv << kBenchCsvHeader << '\n';
    Json rows = Json::array();
    Json times = Json::array();
    std::optional<Json> reference;
    bool agree = true;
    auto emit = [&](std::string_view kind, int row_bits, unsigned threads, std::uint64_t items, double secs,
                    std::string_view verdict) {
        csv << kind << ',' << row_bits << ',' << c.n << ',' << threads << ',' << items << ',' << secs << ','
            << (secs > 0 ? static_cast<double>(items) / secs : 0.0) << ',' << verdict << '\n';
        rows.push_back(Json{{"kind", kind}, {"bits", row_bits}, {"threads", threads}, {"items", items},
                            {"verdict", verdict}});
        times.push_back(secs);
    };

    for (auto t : thread_counts) {
        const auto t0 = Clock::now();
        const auto r = check_k5_free(h, k5_options(c, stop, t));
        const double secs = seconds_since(t0);
        const Json verdict = to_json(r, h);
        if (!reference) reference = verdict;
        agree = agree && verdict == *reference;
        emit("k5", bits, t, r.five_sets, secs, r.violation ? "violation" : r.cancelled ? "cancelled" : "k5_free");
    }

    const auto q = generate_q(c.q_seed.value_or(c.seed), c.q_size.value_or(kBenchQSize), kBenchQBits);
    const auto t0 = Clock::now();
    std::string verdict;
    try {
        const auto built = build_layers(q, c.n);
        verdict = built.run ? "run" : "layers-complete";
    } catch (const ExtractorError&) {
        verdict = "insufficient-layers";
    }
    emit("layers", kBenchQBits, 1, q.size(), seconds_since(t0), verdict);

    out.result["rows"] = std::move(rows);
    out.result["thread_verdicts_agree"] = agree;
    out.timings["row_seconds"] = std::move(times);
    out.csv = csv.str();
    out.exit_code = agree ? kExitOk : kExitFailure;
    return out;
}

Outcome dispatch(const RunConfig& c, std::stop_token stop) {
    if (c.n < 1) usage("--n must be positive");
    if (c.threads < 1) usage("--threads must be positive");
    switch (c.command) {
    case Command::GenColoring: return gen_coloring(c);
    case Command::VerifyColoring: return verify_coloring(c);
    case Command::CheckK5: return check_k5(c, std::move(stop));
    case Command::Alpha: return alpha(c);
    case Command::Independent: return independent(c);
    case Command::ExtractWitness: return extract_witness(c);
    case Command::Steiner: return steiner(c);
    case Command::Bound: return bound(c);
    case Command::Bench: return bench(c, std::move(stop));
    }
    usage("unknown command");
}

} // namespace

RunResult run(const RunConfig& config, std::stop_token stop) {
    RunResult rr;
    rr.report = Json{{"command", to_string(config.command)}, {"config", config_to_json(config)}};
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = dispatch(config, std::move(stop));
    } catch (const Error& err) {
        out.result = Json{{"error", {{"code", to_string(err.code())}, {"message", err.what()}}}};
        out.exit_code = kExitUsage;
    } catch (const std::exception& err) {
        out.result = Json{{"error", {{"code", "Internal"}, {"message", err.what()}}}};
        out.exit_code = kExitFailure;
    }
    out.timings["total_seconds"] = seconds_since(t0);
    rr.exit_code = out.exit_code;
    rr.report["exit_code"] = out.exit_code;
    rr.report["result"] = std::move(out.result);
    rr.report["timings"] = std::move(out.timings);
    rr.csv = std::move(out.csv);
    return rr;
}

std::string_view to_string(Command c) noexcept {
    for (const auto& [cmd, name] : kCommandNames)
        if (cmd == c) return name;
    return "?";
}

std::optional<Command> command_from_string(std::string_view name) noexcept {
    for (const auto& [cmd, n] : kCommandNames)
        if (n == name) return cmd;
    return std::nullopt;
}

Json config_to_json(const RunConfig& c) {
    auto opt_path = [](const std::optional<std::filesystem::path>& p) { return p ? Json(p->string()) : Json(nullptr); };
    auto opt_u64 = [](const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); };
    return Json{{"bits", c.bits},
                {"n", c.n},
                {"seed", c.seed},
                {"coloring", opt_path(c.coloring_path)},
                {"q", opt_path(c.q_path)},
                {"q_seed", opt_u64(c.q_seed)},
                {"q_size", opt_u64(c.q_size)},
                {"save_q", opt_path(c.save_q)},
                {"vertices", c.vertices},
                {"cap", opt_u64(c.cap)},
                {"threads", c.threads},
                {"force", c.force},
                {"certify", c.certify},
                {"max_seeds", c.max_seeds},
                {"repair_flips", c.repair_flips},
                {"core", opt_path(c.core_path)},
                {"sampled", c.sampled},
                {"trials", c.trials},
                {"all_colorings", c.all_colorings},
                {"colorings", c.colorings},
                {"vertex_cap", opt_u64(c.vertex_cap)},
                {"c_prime", c.c_prime}};
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    if (j.contains("command")) {
        const auto cmd = command_from_string(j.at("command").get<std::string>());
        if (!cmd) throw Error(ErrorCode::UsageError, "unknown command in config");
        c.command = *cmd;
    }
    const Json& cfg = j.contains("config") ? j.at("config") : j;
    auto get = [&](const char* key, auto& field) {
        if (cfg.contains(key) && !cfg.at(key).is_null()) field = cfg.at(key).get<std::decay_t<decltype(field)>>();
    };
    auto get_opt = [&](const char* key, auto& field) {
        if (cfg.contains(key) && !cfg.at(key).is_null())
            field = cfg.at(key).get<typename std::decay_t<decltype(field)>::value_type>();
    };
    get("bits", c.bits);
    get("n", c.n);
    get("seed", c.seed);
    if (cfg.contains("coloring") && !cfg.at("coloring").is_null())
        c.coloring_path = cfg.at("coloring").get<std::string>();
    if (cfg.contains("q") && !cfg.at("q").is_null()) c.q_path = cfg.at("q").get<std::string>();
    if (cfg.contains("save_q") && !cfg.at("save_q").is_null()) c.save_q = cfg.at("save_q").get<std::string>();
    get_opt("q_seed", c.q_seed);
    get_opt("q_size", c.q_size);
    get("vertices", c.vertices);
    get_opt("cap", c.cap);
    get("threads", c.threads);
    get("force", c.force);
    get("certify", c.certify);
    get("max_seeds", c.max_seeds);
    get("repair_flips", c.repair_flips);
    if (cfg.contains("core") && !cfg.at("core").is_null()) c.core_path = cfg.at("core").get<std::string>();
    get("sampled", c.sampled);
    get("trials", c.trials);
    get("all_colorings", c.all_colorings);
    get("colorings", c.colorings);
    get_opt("vertex_cap", c.vertex_cap);
    get("c_prime", c.c_prime);
    return c;
}

unsigned default_threads() {
    if (const char* env = std::getenv("STEPUP_THREADS")) {
        char* end = nullptr;
        const auto v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

} // namespace stepup
