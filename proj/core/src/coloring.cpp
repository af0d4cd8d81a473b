#include "stepup/coloring.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "stepup/combinatorics.hpp"
#include "stepup/rng.hpp"

namespace stepup {

namespace {

void check_size(int size) {
    if (size < 2 || size > kMaxBits)
        throw Error(ErrorCode::InvalidD, "coloring ground set size must be in [2, 64], got " + std::to_string(size));
}

void check_n(int size, int n) {
    if (n < 3 || n > size)
        throw Error(ErrorCode::InvalidN,
                    "need 3 <= n <= D, got n=" + std::to_string(n) + " D=" + std::to_string(size));
}

bool has_good_triple(const PairColoring& phi, std::span<const int> s) noexcept {
    const std::size_t k = s.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            for (std::size_t l = j + 1; l < k; ++l)
                if (is_good_triple(phi, s[i], s[j], s[l])) return true;
    return false;
}

// Partial Fisher-Yates over [0, size), first n entries sorted.
std::vector<int> random_subset(int size, int n, Rng& rng) {
    std::vector<int> pool(size);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng.below(size - i)]);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// Incremental bad-subset bookkeeping for the repair walk.
class RepairState {
public:
    RepairState(PairColoring& phi, int n) : phi_(phi), n_(n) {
        const int size = phi.size();
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            const auto id = static_cast<std::uint32_t>(subset_count());
            members_.insert(members_.end(), idx.begin(), idx.end());
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) by_pair_[pair_slot(idx[i], idx[j])].push_back(id);
        } while (next_combination<int>(idx, size));
        bad_.resize(subset_count());
        where_.assign(subset_count(), kAbsent);
        for (std::size_t id = 0; id < subset_count(); ++id)
            if (!has_good_triple(phi_, subset(id))) mark_bad(static_cast<std::uint32_t>(id));
    }

    std::uint64_t bad_count() const noexcept { return bad_list_.size(); }
    std::span<const int> random_bad(Rng& rng) const { return subset(bad_list_[rng.below(bad_list_.size())]); }

    // Flip (a,b); returns the change in the bad count and records the
    // subsets whose status changed.
    long flip(int a, int b) {
        phi_.flip(a, b);
        changed_.clear();
        long d = 0;
        for (auto id : by_pair_[pair_slot(a, b)]) {
            const bool now = !has_good_triple(phi_, subset(id));
            if (now != static_cast<bool>(bad_[id])) {
                changed_.push_back(id);
                d += now ? 1 : -1;
            }
        }
        return d;
    }

    void commit() {
        for (auto id : changed_) bad_[id] ? mark_good(id) : mark_bad(id);
    }

    void undo(int a, int b) { phi_.flip(a, b); }

private:
    std::size_t subset_count() const noexcept { return members_.size() / n_; }
    std::span<const int> subset(std::size_t id) const noexcept { return {members_.data() + id * n_, std::size_t(n_)}; }
    static std::size_t pair_slot(int a, int b) noexcept { return static_cast<std::size_t>(a) * kMaxBits + b; }

    static constexpr std::uint32_t kAbsent = UINT32_MAX;

    void mark_bad(std::uint32_t id) {
        bad_[id] = 1;
        where_[id] = static_cast<std::uint32_t>(bad_list_.size());
        bad_list_.push_back(id);
    }

    void mark_good(std::uint32_t id) {
        bad_[id] = 0;
        const auto last = bad_list_.back();
        bad_list_[where_[id]] = last;
        where_[last] = where_[id];
        bad_list_.pop_back();
        where_[id] = kAbsent;
    }

    PairColoring& phi_;
    int n_;
    std::vector<int> members_;
    std::vector<std::vector<std::uint32_t>> by_pair_ = std::vector<std::vector<std::uint32_t>>(kMaxBits * kMaxBits);
    std::vector<std::uint8_t> bad_;
    std::vector<std::uint32_t> bad_list_, where_;
    std::vector<std::uint32_t> changed_;
};

constexpr double kWalkNoise = 0.08;

} // namespace

PairColoring::PairColoring(int size, std::uint64_t seed) : size_(size), seed_(seed) { check_size(size); }

Color PairColoring::color(int a, int b) const {
    if (a == b || a < 0 || b < 0 || a >= size_ || b >= size_)
        throw Error(ErrorCode::InvalidParams, "bad pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return blue(a, b) ? Color::Blue : Color::Red;
}

void PairColoring::set(int a, int b, Color c) {
    if (color(a, b) != c) flip(a, b);
}

void PairColoring::flip(int a, int b) {
    rows_[a] ^= std::uint64_t{1} << b;
    rows_[b] ^= std::uint64_t{1} << a;
}

PairColoring sample_coloring(int size, std::uint64_t seed) {
    PairColoring phi(size, seed);
    Rng rng(derive_seed(seed, "coloring"));
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b)
            if (rng.coin()) phi.flip(a, b);
    return phi;
}

PairColoring uniform_coloring(int size, Color c) {
    PairColoring phi(size);
    if (c == Color::Blue)
        for (int a = 0; a < size; ++a)
            for (int b = a + 1; b < size; ++b) phi.flip(a, b);
    return phi;
}

std::optional<GoodTriple> find_good_triple(const PairColoring& phi, std::span<const int> values) {
    if (values.size() < 3)
        throw Error(ErrorCode::SetTooSmall, "need at least 3 values, got " + std::to_string(values.size()));
    std::vector<int> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw Error(ErrorCode::InvalidParams, "duplicate values in good-triple search");
    if (s.front() < 0 || s.back() >= phi.size())
        throw Error(ErrorCode::InvalidParams, "value outside the coloring's ground set");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            for (std::size_t k = j + 1; k < s.size(); ++k)
                if (is_good_triple(phi, s[i], s[j], s[k])) return GoodTriple{s[i], s[j], s[k]};
    return std::nullopt;
}

CertificationResult certify_good_property(const PairColoring& phi, int n, const CertificationMode& mode,
                                          std::uint64_t exact_cap) {
    check_n(phi.size(), n);
    CertificationResult result;
    result.total = binomial(phi.size(), n);

    if (const auto* sampled = std::get_if<SampledMode>(&mode)) {
        Rng rng(derive_seed(sampled->seed, "certify-sample"));
        result.verdict = Verdict::Estimated;
        for (std::uint64_t t = 0; t < sampled->trials; ++t) {
            auto s = random_subset(phi.size(), n, rng);
            ++result.checked;
            if (!has_good_triple(phi, s)) {
                result.verdict = Verdict::Refuted;
                result.counterexample = std::move(s);
                break;
            }
        }
        return result;
    }

    if (result.total > exact_cap)
        throw Error(ErrorCode::BudgetExceeded, "binom(" + std::to_string(phi.size()) + "," + std::to_string(n) +
                                                   ") = " + std::to_string(result.total) + " exceeds exact cap " +
                                                   std::to_string(exact_cap) + "; use sampled mode");
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    do {
        ++result.checked;
        if (!has_good_triple(phi, s)) {
            result.verdict = Verdict::Refuted;
            result.counterexample = s;
            return result;
        }
    } while (next_combination<int>(s, phi.size()));
    result.verdict = Verdict::Certified;
    return result;
}

std::uint64_t count_bad_subsets(const PairColoring& phi, int n, std::uint64_t exact_cap) {
    check_n(phi.size(), n);
    if (binomial(phi.size(), n) > exact_cap) throw Error(ErrorCode::BudgetExceeded, "too many subsets to count");
    std::uint64_t bad = 0;
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    do {
        bad += !has_good_triple(phi, s);
    } while (next_combination<int>(s, phi.size()));
    return bad;
}

SearchResult search_certified_coloring(int size, int n, const SearchOptions& options) {
    check_size(size);
    check_n(size, n);
    if (binomial(size, n) > options.exact_cap)
        throw Error(ErrorCode::BudgetExceeded, "certified-coloring search needs exact certification");
    const int front = options.core ? (size - options.core->size()) / 2 : 0;
    if (options.core && options.core->size() > size)
        throw Error(ErrorCode::InvalidParams, "core coloring on " + std::to_string(options.core->size()) +
                                                  " points does not fit in " + std::to_string(size));

    SearchResult result;
    result.best_bad = binomial(size, n);
    for (std::uint64_t k = 0; k < options.max_seeds; ++k) {
        const std::uint64_t seed = options.first_seed + k;
        ++result.seeds_tried;
        PairColoring phi = sample_coloring(size, seed);
        if (options.core)
            for (int a = 0; a < options.core->size(); ++a)
                for (int b = a + 1; b < options.core->size(); ++b)
                    if (phi.blue(a + front, b + front) != options.core->blue(a, b)) phi.flip(a + front, b + front);
        RepairState state(phi, n);
        auto note_best = [&] {
            if (!result.closest || state.bad_count() < result.best_bad) {
                result.best_bad = state.bad_count();
                result.closest = phi;
            }
        };
        note_best();
        Rng rng(derive_seed(seed, "repair"));
        std::uint64_t flips = 0;
        std::vector<std::pair<int, int>> inside, best;
        while (state.bad_count() > 0 && flips < options.repair_flips) {
            // focused walk: repair one bad subset by flipping one of its pairs
            const auto target = state.random_bad(rng);
            inside.clear();
            for (std::size_t i = 0; i < target.size(); ++i)
                for (std::size_t j = i + 1; j < target.size(); ++j) inside.emplace_back(target[i], target[j]);
            std::pair<int, int> pick;
            if (rng.unit() < kWalkNoise) {
                pick = inside[rng.below(inside.size())];
            } else {
                long best_d = LONG_MAX;
                for (const auto& [a, b] : inside) {
                    const long d = state.flip(a, b);
                    state.undo(a, b);
                    if (d < best_d) {
                        best.clear();
                        best_d = d;
                    }
                    if (d == best_d) best.push_back({a, b});
                }
                pick = best[rng.below(best.size())];
            }
            state.flip(pick.first, pick.second);
            state.commit();
            ++flips;
            note_best();
        }
        if (state.bad_count() == 0 &&
            certify_good_property(phi, n, ExactMode{}, options.exact_cap).verdict == Verdict::Certified) {
            result.coloring = std::move(phi);
            result.flips = flips;
            return result;
        }
    }
    return result;
}

double log_failure_probability_bound(std::uint64_t D, std::uint64_t n, double c_prime) {
    if (n < 3 || n > D || !(c_prime >= 0.0) || !std::isfinite(c_prime))
        throw Error(ErrorCode::InvalidParams, "need 3 <= n <= D and c' >= 0");
    const std::uint64_t k = std::min(n, D - n);
    // log binom(D, k) as a sum of k log-ratios; exact terms, no lgamma cancellation.
    double log_binom = 0.0;
    for (std::uint64_t i = 1; i <= k; ++i)
        log_binom += std::log(static_cast<double>(D - k + i) / static_cast<double>(i));
    const double nn = static_cast<double>(n);
    return log_binom + c_prime * nn * nn * std::log(0.75);
}

double failure_probability_bound(std::uint64_t D, std::uint64_t n, double c_prime) {
    return std::exp(log_failure_probability_bound(D, n, c_prime));
}

std::string serialize_coloring(const PairColoring& phi) {
    std::string out = "STEPUP-PHI v1 D=" + std::to_string(phi.size()) + " seed=" + std::to_string(phi.seed()) + "\n";
    const std::size_t header = out.size();
    out.resize(header + (phi.pair_count() + 7) / 8, '\0');
    std::size_t k = 0;
    for (int a = 0; a < phi.size(); ++a)
        for (int b = a + 1; b < phi.size(); ++b, ++k)
            if (phi.blue(a, b)) out[header + k / 8] = static_cast<char>(out[header + k / 8] | (1 << (k % 8)));
    return out;
}

PairColoring parse_coloring(std::string_view bytes) {
    const auto eol = bytes.find('\n');
    if (eol == std::string_view::npos) throw Error(ErrorCode::IoError, "coloring file has no header line");
    const std::string header(bytes.substr(0, eol));
    int size = 0;
    unsigned long long seed = 0;
    char tail = 0;
    if (std::sscanf(header.c_str(), "STEPUP-PHI v1 D=%d seed=%llu%c", &size, &seed, &tail) != 2 ||
        header.rfind("STEPUP-PHI v1 D=", 0) != 0)
        throw Error(ErrorCode::IoError, "bad coloring header: '" + header + "'");
    if (size < 2 || size > kMaxBits) throw Error(ErrorCode::IoError, "coloring D out of range: " + header);

    PairColoring phi(size, seed);
    const auto body = bytes.substr(eol + 1);
    if (body.size() != (phi.pair_count() + 7) / 8)
        throw Error(ErrorCode::IoError, "coloring body has " + std::to_string(body.size()) + " bytes, expected " +
                                            std::to_string((phi.pair_count() + 7) / 8));
    std::size_t k = 0;
    for (int a = 0; a < size; ++a)
        for (int b = a + 1; b < size; ++b, ++k)
            if ((static_cast<unsigned char>(body[k / 8]) >> (k % 8)) & 1U) phi.flip(a, b);
    for (; k < body.size() * 8; ++k)
        if ((static_cast<unsigned char>(body[k / 8]) >> (k % 8)) & 1U)
            throw Error(ErrorCode::IoError, "nonzero padding bits in coloring body");
    return phi;
}

void save_coloring(const PairColoring& phi, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    const auto bytes = serialize_coloring(phi);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

PairColoring load_coloring(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_coloring(bytes);
}

std::string_view to_string(Color c) noexcept { return c == Color::Red ? "Red" : "Blue"; }

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Estimated: return "Estimated";
    }
    return "?";
}

} // namespace stepup
