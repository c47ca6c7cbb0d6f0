/*
 * Copyright 2026 The TXL-ACAM Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "txl/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace txl::io {

/// Shortest decimal text that parses back to the same double.
inline std::string fmt(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

inline std::string fmt(long long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }

inline double parse_double(std::string_view s, const std::string& where)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw ParseError(where + ": expected a number, got '" + std::string(s) + "'");
    return v;
}

namespace detail {

// shown * scale, done as a division by the exact power of ten for sub-unit
// scales so "15" ns reads as the same double as the literal 15e-9
inline double unscale(double shown, double scale)
{
    return scale < 1.0 ? shown / std::round(1.0 / scale) : shown * scale;
}

} // namespace detail

/// Value written in a scaled unit. Prefers the shortest text t that
/// reads back to exactly x (so 15 ns prints as 15); otherwise falls back to
/// fmt(x / scale), which parse_scaled recovers by an ulp search.
inline std::string fmt_scaled(double x, double scale)
{
    const double shown = x / scale;
    if (scale == 1.0 || !std::isfinite(shown)) return fmt(shown);
    char buf[64];
    for (int p = 1; p <= 17; ++p) {
        auto r = std::to_chars(buf, buf + sizeof buf, shown, std::chars_format::general, p);
        double back = 0.0;
        std::from_chars(buf, r.ptr, back);
        if (detail::unscale(back, scale) == x) return fmt(back);
    }
    return fmt(shown);
}

inline double parse_scaled(std::string_view s, double scale, const std::string& where)
{
    const double shown = parse_double(s, where);
    if (scale == 1.0) return shown;
    const double x = detail::unscale(shown, scale);
    // text written by fmt_scaled comes back exactly; anything else reads as shown * scale
    const std::string text = fmt(shown);
    auto writes_as = [&](double y) {
        const auto t = fmt_scaled(y, scale);
        return t == text || parse_double(t, where) == shown;
    };
    if (writes_as(x)) return x;
    double up = x, down = x;
    for (int i = 0; i < 8; ++i) {
        up = std::nextafter(up, HUGE_VAL);
        down = std::nextafter(down, -HUGE_VAL);
        if (writes_as(up)) return up;
        if (writes_as(down)) return down;
    }
    return x;
}

inline long long parse_int(std::string_view s, const std::string& where)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw ParseError(where + ": expected an integer, got '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Write through a temporary sibling and rename into place.
inline void write_file_atomic(const std::filesystem::path& p, const std::string& content)
{
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot write " + tmp.string());
        out << content;
        if (!out) throw ParseError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

} // namespace txl::io
