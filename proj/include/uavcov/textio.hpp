#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "uavcov/errors.hpp"

namespace uavcov {

// Shortest round-trip decimal form; keeps scenario/solution files diffable
// and byte-stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("bad float for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view s, std::string_view what) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

inline unsigned long long parse_uint(std::string_view s, std::string_view what) {
    unsigned long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("bad unsigned integer for " + std::string(what) + ": '" +
                         std::string(s) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Extracts the value of a `key=value` token, throwing if the key differs.
inline std::string_view expect_kv(std::string_view token, std::string_view key) {
    auto eq = token.find('=');
    if (eq == std::string_view::npos || token.substr(0, eq) != key) {
        throw ParseError("expected '" + std::string(key) + "=...', got '" + std::string(token) + "'");
    }
    return token.substr(eq + 1);
}

} // namespace uavcov
