#pragma once

#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "kpb/errors.hpp"
#include "kpb/evolution.hpp"

namespace kpb {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(line, key, "expected a real number, got '" + v + "'");
    }
}

inline long parse_int(const std::string& v, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError(line, key, "expected an integer, got '" + v + "'");
    }
}

}  // namespace detail

/// Line-oriented `key = value` text. Blank lines and lines starting with '#'
/// are ignored. Unknown and duplicate keys are rejected with line numbers.
inline SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = detail::trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, s, "expected 'key = value'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, key, "empty key");
        if (auto it = seen.find(key); it != seen.end())
            throw ConfigError(line, key,
                              "duplicate key (first seen on line " +
                                  std::to_string(it->second) + ")");
        seen[key] = line;

        if (key == "p") {
            const long p = detail::parse_int(val, line, key);
            if (p < 1) throw ConfigError(line, key, "p must be >= 1");
            cfg.p = static_cast<int>(p);
        } else if (key == "nu") {
            cfg.nu = detail::parse_real(val, line, key);
            if (!(cfg.nu > 0.0)) throw ConfigError(line, key, "nu must be positive");
        } else if (key == "eps") {
            const long e = detail::parse_int(val, line, key);
            if (e != 1 && e != -1) throw ConfigError(line, key, "eps must be +1 or -1");
            cfg.eps = static_cast<int>(e);
        } else if (key == "nx" || key == "ny") {
            const long n = detail::parse_int(val, line, key);
            if (n < 8 || n % 2 != 0) throw ConfigError(line, key, "mode count must be even and >= 8");
            (key == "nx" ? cfg.nx : cfg.ny) = static_cast<int>(n);
        } else if (key == "Lx" || key == "Ly") {
            const double L = detail::parse_real(val, line, key);
            if (!(L > 0.0)) throw ConfigError(line, key, "box length must be positive");
            (key == "Lx" ? cfg.Lx : cfg.Ly) = L;
        } else if (key == "dt") {
            cfg.dt = detail::parse_real(val, line, key);
            if (!(cfg.dt > 0.0)) throw ConfigError(line, key, "dt must be positive");
        } else if (key == "t_end") {
            cfg.t_end = detail::parse_real(val, line, key);
            if (cfg.t_end < 0.0) throw ConfigError(line, key, "t_end must be >= 0");
        } else if (key == "snapshots") {
            cfg.snapshots.clear();
            std::istringstream ls(val);
            std::string item;
            while (std::getline(ls, item, ',')) {
                const std::string it = detail::trim(item);
                if (it.empty()) continue;
                cfg.snapshots.push_back(detail::parse_real(it, line, key));
            }
        } else if (key == "seed") {
            const long sd = detail::parse_int(val, line, key);
            if (sd < 0) throw ConfigError(line, key, "seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(sd);
        } else if (key == "init_kind") {
            if (val != "gaussian-dipole" && val != "random-zero-mass")
                throw ConfigError(line, key, "unknown initial data kind '" + val + "'");
            cfg.init_kind = val;
        } else if (key == "init_amplitude") {
            cfg.init_amplitude = detail::parse_real(val, line, key);
        } else if (key == "output_dir") {
            if (val.empty()) throw ConfigError(line, key, "output_dir must not be empty");
            cfg.output_dir = val;
        } else {
            throw ConfigError(line, key, "unknown key");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, "-", e.what());
    }
    return cfg;
}

}  // namespace kpb
