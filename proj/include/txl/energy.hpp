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

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace txl {

enum class CellKind { txl9t4r, sixt2r };
enum class Regime { low, high };

inline const char* to_string(CellKind k) { return k == CellKind::txl9t4r ? "txl9t4r" : "sixt2r"; }

inline CellKind parse_cell_kind(const std::string& s)
{
    if (s == "txl9t4r") return CellKind::txl9t4r;
    if (s == "sixt2r") return CellKind::sixt2r;
    throw ParseError("unknown cell kind '" + s + "'");
}

/// Per-event cell energy over one clock cycle, anchored at the low (v_in = 0)
/// and high (v_in = vdd) input regimes.
class EnergyTable {
public:
    /// Pixel comparison figures for one 15 ns cycle.
    static EnergyTable defaults()
    {
        EnergyTable t;
        t.set(CellKind::sixt2r, Outcome::match, Regime::low, 2.25e-12);
        t.set(CellKind::sixt2r, Outcome::match, Regime::high, 2.25e-12);
        t.set(CellKind::sixt2r, Outcome::mismatch, Regime::low, 479.2e-15);
        t.set(CellKind::sixt2r, Outcome::mismatch, Regime::high, 3.84e-12);
        t.set(CellKind::txl9t4r, Outcome::match, Regime::low, 152e-15);
        t.set(CellKind::txl9t4r, Outcome::match, Regime::high, 168e-15);
        t.set(CellKind::txl9t4r, Outcome::mismatch, Regime::low, 30e-15);
        t.set(CellKind::txl9t4r, Outcome::mismatch, Regime::high, 130e-15);
        return t;
    }

    Joules get(CellKind k, Outcome o, Regime r) const { return e_[slot(k, o, r)]; }

    void set(CellKind k, Outcome o, Regime r, Joules e)
    {
        if (!(e >= 0.0)) throw OutOfRange("energy table entries must be non-negative");
        e_[slot(k, o, r)] = e;
    }

    bool operator==(const EnergyTable&) const = default;

private:
    static std::size_t slot(CellKind k, Outcome o, Regime r)
    {
        return static_cast<std::size_t>(k) * 4 + static_cast<std::size_t>(o) * 2 + static_cast<std::size_t>(r);
    }
    std::array<Joules, 8> e_{};
};

/// Linear interpolation between the regime anchors.
inline Joules event_cost(const EnergyTable& table, CellKind kind, Outcome outcome, Volts v_in, Volts vdd = 3.0)
{
    if (v_in < 0.0 || v_in > vdd) throw OutOfRange("input voltage outside [0, vdd]");
    const Joules lo = table.get(kind, outcome, Regime::low);
    const Joules hi = table.get(kind, outcome, Regime::high);
    if (lo == hi) return lo;
    const double x = v_in / vdd;
    return lo + x * (hi - lo);
}

inline constexpr Joules kReferenceIcEnergyPerSearchPerCell = 185e-15;

struct EnergyReport {
    CellKind kind = CellKind::txl9t4r;
    std::vector<Joules> per_row;
    Joules total = 0.0;
    Joules per_search_per_cell = 0.0;
    double peripheral_overhead_factor = 0.0;
    double cycle_rate_hz = 1.0 / 15e-9;
    Joules reference_table2 = kReferenceIcEnergyPerSearchPerCell;
};

/// One clock cycle of cell energy for a completed search.
inline EnergyReport search_energy(const SearchResult& result, const EnergyTable& table, double overhead = 0.0,
                                  CellKind kind = CellKind::txl9t4r, Seconds t_clock = 15e-9)
{
    if (overhead < 0.0) throw OutOfRange("peripheral overhead factor must be non-negative");
    EnergyReport rep;
    rep.kind = kind;
    rep.peripheral_overhead_factor = overhead;
    rep.cycle_rate_hz = 1.0 / t_clock;
    rep.per_row.reserve(result.rows.size());
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        Joules row = 0.0;
        for (int c = 0; c < result.columns; ++c)
            row += event_cost(table, kind, result.outcome(static_cast<int>(r), c),
                              result.query.values[static_cast<std::size_t>(c)], result.vdd);
        rep.per_row.push_back(row * (1.0 + overhead));
    }
    rep.total = std::accumulate(rep.per_row.begin(), rep.per_row.end(), 0.0);
    const auto cells = result.rows.size() * static_cast<std::size_t>(result.columns);
    rep.per_search_per_cell = cells ? rep.total / static_cast<double>(cells) : 0.0;
    return rep;
}

struct SparsityPoint {
    double sparsity = 0.0;   // fraction of matching cells in the search
    Joules txl9t4r = 0.0;
    Joules sixt2r = 0.0;
    double ratio() const { return txl9t4r > 0.0 ? sixt2r / txl9t4r : 0.0; }
};

struct DesignComparison {
    Joules total_txl9t4r = 0.0;
    Joules total_sixt2r = 0.0;
    // average cost per event over the workload, NaN-free (0 when absent)
    Joules avg_match_txl9t4r = 0.0;
    Joules avg_mismatch_txl9t4r = 0.0;
    Joules avg_match_sixt2r = 0.0;
    Joules avg_mismatch_sixt2r = 0.0;
    std::vector<SparsityPoint> curve;   // one point per search, in workload order
};

/// Evaluate the same workload under both matchline paradigms.
inline DesignComparison compare_designs(const std::vector<SearchResult>& workload, const EnergyTable& table)
{
    DesignComparison cmp;
    Joules sum[2][2] = {};
    std::size_t n[2] = {};
    for (const auto& res : workload) {
        const auto e9 = search_energy(res, table, 0.0, CellKind::txl9t4r);
        const auto e6 = search_energy(res, table, 0.0, CellKind::sixt2r);
        cmp.total_txl9t4r += e9.total;
        cmp.total_sixt2r += e6.total;
        std::size_t matches = 0;
        for (std::size_t r = 0; r < res.rows.size(); ++r) {
            for (int c = 0; c < res.columns; ++c) {
                const Outcome o = res.outcome(static_cast<int>(r), c);
                const Volts v = res.query.values[static_cast<std::size_t>(c)];
                const auto oi = static_cast<std::size_t>(o);
                sum[0][oi] += event_cost(table, CellKind::txl9t4r, o, v, res.vdd);
                sum[1][oi] += event_cost(table, CellKind::sixt2r, o, v, res.vdd);
                ++n[oi];
                matches += o == Outcome::match ? 1 : 0;
            }
        }
        const auto cells = res.rows.size() * static_cast<std::size_t>(res.columns);
        cmp.curve.push_back({cells ? static_cast<double>(matches) / static_cast<double>(cells) : 0.0, e9.total,
                             e6.total});
    }
    auto avg = [&](int kind, Outcome o) {
        const auto oi = static_cast<std::size_t>(o);
        return n[oi] ? sum[kind][oi] / static_cast<double>(n[oi]) : 0.0;
    };
    cmp.avg_match_txl9t4r = avg(0, Outcome::match);
    cmp.avg_mismatch_txl9t4r = avg(0, Outcome::mismatch);
    cmp.avg_match_sixt2r = avg(1, Outcome::match);
    cmp.avg_mismatch_sixt2r = avg(1, Outcome::mismatch);
    return cmp;
}

/// Synthetic search outcome with a prescribed hit sparsity. Column inputs sit
/// on a uniform midpoint grid over [0, vdd]; matching cells are the first
/// round(sparsity * cells) of a seeded permutation, so the matching sets are
/// nested as sparsity grows.
inline SearchResult sparsity_search(int rows, int columns, Volts vdd, double sparsity, std::uint64_t seed)
{
    if (sparsity < 0.0 || sparsity > 1.0) throw OutOfRange("sparsity must lie in [0, 1]");
    SearchResult res;
    res.columns = columns;
    res.vdd = vdd;
    res.rows.resize(static_cast<std::size_t>(rows));
    for (int c = 0; c < columns; ++c) res.query.values.push_back(vdd * (c + 0.5) / columns);

    const auto cells = static_cast<std::size_t>(rows) * static_cast<std::size_t>(columns);
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 gen(seed);
    std::shuffle(order.begin(), order.end(), gen);
    const auto hits = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(cells)));
    res.outcomes.assign(cells, Outcome::mismatch);
    for (std::size_t i = 0; i < hits; ++i) res.outcomes[order[i]] = Outcome::match;
    for (int r = 0; r < rows; ++r) {
        int count = 0;
        for (int c = 0; c < columns; ++c) count += res.outcome(r, c) == Outcome::match ? 1 : 0;
        res.rows[static_cast<std::size_t>(r)].count = count;
    }
    return res;
}

} // namespace txl
