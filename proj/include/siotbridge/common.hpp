#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace siotbridge {

/// Fatal condition raised by any stage of the pipeline.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-fatal problems collected while loading data.
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string msg) { messages.push_back(std::move(msg)); }
    std::size_t size() const noexcept { return messages.size(); }
    bool empty() const noexcept { return messages.empty(); }
};

// ---------------------------------------------------------------------------
// Keyed deterministic randomness.
//
// Every random decision in the simulator is a pure function of a key tuple
// (seed, replicate, stream, entity). No generator state is carried between
// calls, so parallel and sequential evaluation give bit-identical results.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_keys(std::uint64_t a) noexcept { return splitmix64(a); }

template <typename... Rest>
inline constexpr std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b, Rest... rest) noexcept {
    return mix_keys(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL), rest...);
}

/// Uniform double in [0, 1) from 53 high bits of a hashed key.
inline constexpr double unit_interval(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Stable 64-bit FNV-1a; std::hash is not guaranteed stable across builds.
inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Text helpers shared by the file readers and writers.
// ---------------------------------------------------------------------------

inline std::string_view trim(std::string_view s) noexcept {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

/// Splits on runs of spaces or tabs; empty fields are not produced.
inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const auto b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > b) out.emplace_back(s.substr(b, i - b));
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    const std::string tmp(trim(s));
    if (tmp.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size();
}

inline bool parse_int(std::string_view s, long long& out) {
    const std::string tmp(trim(s));
    if (tmp.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(tmp.c_str(), &end, 10);
    return end == tmp.c_str() + tmp.size();
}

/// Six significant digits, the fixed numeric format of every CSV we write.
inline std::string fmt_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Full round-trip precision, used for coordinates in intermediate files.
inline std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

/// Writes text with LF endings; throws when the path cannot be opened.
inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
    if (!out) throw Error("write failed: " + path);
}

} // namespace siotbridge
