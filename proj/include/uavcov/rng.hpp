#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uavcov {

// All randomness flows from one run seed through named substreams so that
// components (scenario, clustering, each per-cluster solver) draw from
// independent, reproducible streams.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

inline std::uint64_t substream_seed(std::uint64_t base, std::string_view label,
                                    std::uint64_t a = 0, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
    std::uint64_t h = detail::splitmix64(base ^ detail::fnv1a(label));
    h = detail::splitmix64(h ^ a);
    h = detail::splitmix64(h ^ b);
    h = detail::splitmix64(h ^ c);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::string_view label,
                                std::uint64_t a = 0, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    return std::mt19937_64(substream_seed(base, label, a, b, c));
}

} // namespace uavcov
