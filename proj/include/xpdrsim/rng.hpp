#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace xpdrsim {

// splitmix64; used to derive independent per-pulse / per-source seed streams
// so pulses can be synthesized in any order (or in parallel) with identical
// results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index,
                                 std::string_view label) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ splitmix64(index));
    s = splitmix64(s ^ hash_label(label));
    return s;
}

inline std::mt19937_64 make_engine(std::uint64_t master_seed, std::uint64_t index,
                                    std::string_view label) {
    return std::mt19937_64(stream_seed(master_seed, index, label));
}

}  // namespace xpdrsim
