#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "stepup/harness.hpp"

namespace stepup::cli {

namespace {

struct Sinks {
    std::string report_path;
    std::string csv_path;
};

void add_coloring_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--bits", c.bits, "Bit width D of the vertex set {0..2^D-1}")->check(CLI::Range(0, 64));
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--coloring", c.coloring_path, "STEPUP-PHI coloring file");
}

void add_common(CLI::App* sub, RunConfig& c, Sinks& sinks) {
    sub->add_option("--n", c.n, "Target independent-set size / run length");
    sub->add_option("--cap", c.cap, "Enumeration budget (command specific)");
    sub->add_option("--threads", c.threads, "Worker threads (default: STEPUP_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--force", c.force, "Ignore enumeration budgets");
    sub->add_option("--output", sinks.report_path, "Write the JSON report here instead of stdout");
}

void add_q_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--q", c.q_path, "STEPUP-Q vertex file");
    sub->add_option("--q-seed", c.q_seed, "Seed for a uniformly drawn Q");
    sub->add_option("--q-size", c.q_size, "Size of the drawn Q");
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        err << "stepup: cannot write " << path << '\n';
        return false;
    }
    return true;
}

int emit(const RunResult& r, const Sinks& sinks, std::ostream& out, std::ostream& err) {
    const auto json = r.report.dump(2) + "\n";
    if (!r.csv.empty()) {
        if (!sinks.csv_path.empty()) {
            if (!write_file(sinks.csv_path, r.csv, err)) return kExitUsage;
        } else {
            out << r.csv;
        }
        if (!sinks.report_path.empty() && !write_file(sinks.report_path, json, err)) return kExitUsage;
        return r.exit_code;
    }
    if (!sinks.report_path.empty()) {
        if (!write_file(sinks.report_path, json, err)) return kExitUsage;
    } else {
        out << json;
    }
    if (r.report.at("result").contains("error")) err << "stepup: " << r.report["result"]["error"]["message"].get<std::string>() << '\n';
    return r.exit_code;
}

int replay(const std::string& path, const Sinks& sinks, std::ostream& out, std::ostream& err) {
    std::ifstream f(path);
    if (!f) {
        err << "stepup: cannot open " << path << '\n';
        return kExitUsage;
    }
    const auto recorded = Json::parse(f, nullptr, false);
    if (recorded.is_discarded() || !recorded.contains("command")) {
        err << "stepup: " << path << " is not a stepup report\n";
        return kExitUsage;
    }
    RunConfig config;
    try {
        config = config_from_json(recorded);
    } catch (const std::exception& e) {
        err << "stepup: " << e.what() << '\n';
        return kExitUsage;
    }
    const auto r = run(config);
    const int code = emit(r, sinks, out, err);
    if (recorded.contains("result") && recorded["result"] != r.report["result"]) {
        err << "stepup: replayed result differs from " << path << '\n';
        return kExitFailure;
    }
    return code;
}

} // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stepping-up 4-graph toolkit: colorings, K5 checks, independence, edge witnesses"};
    app.require_subcommand(1);

    RunConfig c;
    c.threads = default_threads();
    Sinks sinks;
    std::string replay_path;

    auto* gen = app.add_subcommand("gen-coloring", "Sample a pair coloring, optionally searching for a certified one");
    add_coloring_options(gen, c);
    add_common(gen, c, sinks);
    gen->add_flag("--certify", c.certify, "Search seeds (with repair) until Exact certification succeeds");
    gen->add_option("--max-seeds", c.max_seeds, "Seeds to try when certifying");
    gen->add_option("--repair-flips", c.repair_flips, "Repair budget per seed (0 = pure sampling)");
    gen->add_option("--core", c.core_path, "Certified smaller coloring to warm-start every seed from");

    auto* verify = app.add_subcommand("verify-coloring", "Certify that every n-subset contains a good triple");
    add_coloring_options(verify, c);
    add_common(verify, c, sinks);
    verify->add_flag("--exact", "Enumerate every n-subset (default)");
    verify->add_flag("--sampled", c.sampled, "Sample random n-subsets instead");
    verify->add_option("--trials", c.trials, "Samples in --sampled mode");

    auto* k5 = app.add_subcommand("check-k5", "Exhaustive search for five vertices spanning five edges");
    add_coloring_options(k5, c);
    add_common(k5, c, sinks);
    k5->add_flag("--all-colorings", c.all_colorings, "Check every coloring of the pairs of [D]");
    k5->add_option("--colorings", c.colorings, "Number of random colorings derived from --seed");
    k5->add_option("--vertex-cap", c.vertex_cap, "Restrict to vertices {0..cap-1}");

    auto* alpha = app.add_subcommand("alpha", "Exact independence number (D <= 5, D = 6 with --force)");
    add_coloring_options(alpha, c);
    add_common(alpha, c, sinks);

    auto* indep = app.add_subcommand("independent", "Test whether a vertex set spans no edge");
    add_coloring_options(indep, c);
    add_common(indep, c, sinks);
    add_q_options(indep, c);
    indep->add_option("--vertices", c.vertices, "Explicit vertex list");

    auto* extract = app.add_subcommand("extract-witness", "Find an edge inside a large vertex set Q");
    add_coloring_options(extract, c);
    add_common(extract, c, sinks);
    add_q_options(extract, c);
    extract->add_option("--save-q", c.save_q, "Write the drawn Q as a STEPUP-Q file");

    auto* steiner = app.add_subcommand("steiner", "Greedy partial Steiner triple packing on n points");
    add_common(steiner, c, sinks);
    steiner->add_option("--seed", c.seed, "Master seed");

    auto* bound = app.add_subcommand("bound", "binom(D,n) (3/4)^(c' n^2) failure probability bound");
    add_common(bound, c, sinks);
    bound->add_option("--bits", c.bits, "D")->check(CLI::PositiveNumber);
    bound->add_option("--c-prime", c.c_prime, "Exponent constant c'")->check(CLI::NonNegativeNumber);

    auto* bench = app.add_subcommand("bench", "Timed K5 sweep over thread counts and a layer-build run; CSV");
    add_coloring_options(bench, c);
    add_common(bench, c, sinks);
    add_q_options(bench, c);
    bench->add_option("--csv", sinks.csv_path, "Write the CSV here instead of stdout");

    auto* rerun = app.add_subcommand("replay", "Re-run the command echoed in a JSON report and compare results");
    rerun->add_option("report", replay_path, "Report file")->required();
    rerun->add_option("--output", sinks.report_path, "Write the new report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (rerun->parsed()) return replay(replay_path, sinks, out, err);
    for (auto* sub : app.get_subcommands()) c.command = *command_from_string(sub->get_name());
    return emit(run(c), sinks, out, err);
}

} // namespace stepup::cli
