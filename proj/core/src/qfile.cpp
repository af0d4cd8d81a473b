#include "stepup/qfile.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "stepup/rng.hpp"

namespace stepup {

namespace {

constexpr int kBitmapMaxBits = 30;

// Floyd's sampling: each of the m steps inserts exactly one new element.
std::vector<Vertex> sample_bitmap(Rng& rng, std::uint64_t m, std::uint64_t universe) {
    std::vector<std::uint64_t> words((universe + 63) / 64, 0);
    auto test_and_set = [&](std::uint64_t x) {
        auto& w = words[x / 64];
        const auto bit = std::uint64_t{1} << (x % 64);
        const bool was = (w & bit) != 0;
        w |= bit;
        return was;
    };
    for (std::uint64_t j = universe - m; j < universe; ++j)
        if (test_and_set(rng.below(j + 1))) test_and_set(j);

    std::vector<Vertex> out;
    out.reserve(m);
    for (std::uint64_t i = 0; i < words.size(); ++i)
        for (auto w = words[i]; w != 0; w &= w - 1) out.push_back(i * 64 + static_cast<unsigned>(std::countr_zero(w)));
    return out;
}

std::vector<Vertex> sample_sorted(Rng& rng, std::uint64_t m, std::uint64_t universe) {
    std::vector<Vertex> out;
    out.reserve(m);
    while (out.size() < m) {
        const auto have = out.size();
        for (std::uint64_t i = have; i < m; ++i) out.push_back(rng.below(universe));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

} // namespace

std::vector<Vertex> generate_q(std::uint64_t seed, std::uint64_t m, int bits) {
    if (bits < 1 || bits > 63) throw Error(ErrorCode::InvalidParams, "Q bits must be in [1, 63]");
    const std::uint64_t universe = std::uint64_t{1} << bits;
    if (m > universe)
        throw Error(ErrorCode::InvalidParams,
                    "cannot draw " + std::to_string(m) + " distinct vertices from 2^" + std::to_string(bits));
    Rng rng(derive_seed(seed, "q-sample"));
    // a bitmap only pays off when Q is a sizeable fraction of the universe
    const bool dense = bits <= kBitmapMaxBits && universe / 1024 <= m;
    return dense ? sample_bitmap(rng, m, universe) : sample_sorted(rng, m, universe);
}

std::string serialize_q(const std::vector<Vertex>& q, int bits) {
    std::string out = "STEPUP-Q v1 count=" + std::to_string(q.size()) + " bits=" + std::to_string(bits) + "\n";
    const auto header = out.size();
    out.resize(header + 8 * q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        for (int b = 0; b < 8; ++b) out[header + 8 * i + b] = static_cast<char>((q[i] >> (8 * b)) & 0xFF);
    return out;
}

std::vector<Vertex> parse_q(std::string_view bytes, int* bits_out) {
    const auto eol = bytes.find('\n');
    if (eol == std::string_view::npos) throw Error(ErrorCode::IoError, "Q file has no header line");
    const std::string header(bytes.substr(0, eol));
    unsigned long long count = 0;
    int bits = 0;
    char tail = 0;
    if (header.rfind("STEPUP-Q v1 count=", 0) != 0 ||
        std::sscanf(header.c_str(), "STEPUP-Q v1 count=%llu bits=%d%c", &count, &bits, &tail) != 2)
        throw Error(ErrorCode::IoError, "bad Q header: '" + header + "'");
    if (bits < 1 || bits > kMaxBits) throw Error(ErrorCode::IoError, "Q bits out of range: " + header);

    const auto body = bytes.substr(eol + 1);
    if (body.size() / 8 != count || body.size() % 8 != 0)
        throw Error(ErrorCode::IoError, "Q body has " + std::to_string(body.size()) + " bytes, expected " +
                                            std::to_string(8 * count));
    std::vector<Vertex> q(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vertex v = 0;
        for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(body[8 * i + b]);
        q[i] = v;
    }
    require_ordered(q, 0);
    if (bits < kMaxBits && !q.empty() && (q.back() >> bits) != 0)
        throw Error(ErrorCode::MalformedTuple, "Q vertex " + std::to_string(q.back()) + " exceeds 2^" +
                                                   std::to_string(bits));
    if (bits_out) *bits_out = bits;
    return q;
}

void save_q(const std::vector<Vertex>& q, int bits, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    const auto bytes = serialize_q(q, bits);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::vector<Vertex> load_q(const std::filesystem::path& path, int* bits) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_q(bytes, bits);
}

} // namespace stepup
