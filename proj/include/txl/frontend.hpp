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

#include "txl/array.hpp"
#include "txl/compiler.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace txl {

/// Piecewise-linear analogue input.
struct Waveform {
    std::vector<std::pair<Seconds, Volts>> samples;
};

inline void validate(const Waveform& w, Volts vdd)
{
    if (w.samples.empty()) throw OutOfRange("waveform has no samples");
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        if (i > 0 && !(w.samples[i].first > w.samples[i - 1].first))
            throw OutOfRange("waveform times must be strictly increasing");
        if (!(w.samples[i].second >= 0.0 && w.samples[i].second <= vdd))
            throw OutOfRange("waveform value outside [0, vdd]");
    }
}

inline Volts waveform_at(const Waveform& w, Seconds t)
{
    const auto& s = w.samples;
    if (s.empty() || t < s.front().first || t > s.back().first)
        throw OutOfSupport("sample time " + std::to_string(t) + " s outside the waveform");
    auto hi = std::lower_bound(s.begin(), s.end(), t, [](const auto& p, double x) { return p.first < x; });
    if (hi->first == t) return hi->second;
    auto lo = std::prev(hi);
    const double f = (t - lo->first) / (hi->first - lo->first);
    return lo->second + f * (hi->second - lo->second);
}

/// Ideal sample-and-hold: one channel per column, sampled at start + i * period.
inline QueryVector sample_and_hold(const Waveform& w, Seconds start, Seconds period, int n)
{
    QueryVector q;
    q.values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) q.values.push_back(waveform_at(w, start + i * period));
    return q;
}

struct MatchPolicy {
    enum class Kind { exact, best, threshold };
    Kind kind = Kind::exact;
    int k = 0;   // threshold only

    static MatchPolicy exact() { return {Kind::exact, 0}; }
    static MatchPolicy best() { return {Kind::best, 0}; }
    static MatchPolicy threshold(int k) { return {Kind::threshold, k}; }
};

/// Matching rows, ascending. Best match holds at most one row.
struct Classification {
    std::vector<int> rows;
    bool none() const { return rows.empty(); }
    bool operator==(const Classification&) const = default;
};

namespace detail {

inline void check_policy(const MatchPolicy& p, int columns)
{
    if (p.kind == MatchPolicy::Kind::threshold && (p.k < 1 || p.k > columns))
        throw OutOfRange("threshold policy needs 1 <= k <= columns");
}

} // namespace detail

/// Classify a completed search from its analogue matchline samples.
///
/// Threshold(k) re-senses every matchline with v_th at the count law's k
/// boundary voltage; exact is threshold(columns); best is the row with the
/// highest sampled voltage (lowest index on ties), none if every matchline
/// stayed at 0 V.
inline Classification classify(const SearchResult& result, const MatchPolicy& policy, const CountLaw& law)
{
    detail::check_policy(policy, result.columns);
    Classification out;
    if (policy.kind == MatchPolicy::Kind::best) {
        int best = -1;
        Volts best_v = 0.0;
        for (std::size_t r = 0; r < result.rows.size(); ++r) {
            if (result.rows[r].v_ml > best_v) {
                best_v = result.rows[r].v_ml;
                best = static_cast<int>(r);
            }
        }
        if (best >= 0) out.rows.push_back(best);
        return out;
    }
    const int k = policy.kind == MatchPolicy::Kind::exact ? result.columns : policy.k;
    const SenseAmp sa{law.boundary_voltage(k)};
    for (std::size_t r = 0; r < result.rows.size(); ++r)
        if (sense(result.rows[r].v_ml, sa) == SenseResult::hit) out.rows.push_back(static_cast<int>(r));
    return out;
}

/// Count law matching the settings a search was run with.
inline CountLaw count_law_for(const AcamArray& array, const SearchSettings& s)
{
    MatchlineParams p = s.matchline;
    p.vdd = array.config().vdd_txl;
    const Amps i_lim = enable_current_limit(array.cell(0, 0), s.v_en);
    return CountLaw(array.columns(), i_lim, s.model.taper, p, s.timing);
}

/// Reference classifier by direct window arithmetic.
inline Classification oracle_classify(const std::vector<Template>& templates, const QueryVector& query,
                                      const MatchPolicy& policy)
{
    std::vector<std::pair<int, int>> counts;   // (row, count)
    for (const auto& t : templates) {
        int n = 0;
        for (std::size_t c = 0; c < t.windows.size() && c < query.values.size(); ++c)
            n += t.windows[c].contains(query.values[c]) ? 1 : 0;
        counts.emplace_back(t.row, n);
    }
    std::sort(counts.begin(), counts.end());

    Classification out;
    const int columns = static_cast<int>(query.values.size());
    if (policy.kind == MatchPolicy::Kind::best) {
        int best = -1, best_n = 0;
        for (auto [row, n] : counts)
            if (n > best_n) best = row, best_n = n;
        if (best >= 0) out.rows.push_back(best);
        return out;
    }
    detail::check_policy(policy, columns);
    const int k = policy.kind == MatchPolicy::Kind::exact ? columns : policy.k;
    for (auto [row, n] : counts)
        if (n >= k) out.rows.push_back(row);
    return out;
}

} // namespace txl
