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

#include "txl/device.hpp"

#include <algorithm>
#include <vector>

namespace txl {

enum class CellMode { matching, programming };
enum class Fidelity { behavioral, circuit };

inline const char* to_string(Fidelity f) { return f == Fidelity::behavioral ? "behavioral" : "circuit"; }

/// Acceptance interval of one cell. A window with v_low >= v_high is legal
/// and matches nothing.
struct MatchWindow {
    Volts v_low = 0.0;
    Volts v_high = 0.0;

    bool empty() const { return !(v_low < v_high); }
    bool contains(Volts v) const { return v_low < v && v < v_high; }
    Volts midpoint() const { return 0.5 * (v_low + v_high); }

    bool operator==(const MatchWindow&) const = default;
};

/// Matchline drive current as a function of matchline voltage.
///
/// Three shapes: no drive; a limited current source that tapers linearly to
/// zero over the last `taper` volts below vdd; or a tabulated curve
/// (piecewise linear on a uniform grid over [0, vdd]).
class DriveCurve {
public:
    DriveCurve() = default;

    static DriveCurve limited(Amps i_lim, Volts vdd, Volts taper)
    {
        DriveCurve c;
        c.kind_ = Kind::limited;
        c.i_lim_ = i_lim;
        c.vdd_ = vdd;
        c.taper_ = taper;
        return c;
    }

    /// `samples[j]` is the current at vdd * j / (samples.size() - 1). The
    /// table is made non-increasing and forced to zero at vdd.
    static DriveCurve tabulated(std::vector<Amps> samples, Volts vdd)
    {
        DriveCurve c;
        c.kind_ = Kind::table;
        c.vdd_ = vdd;
        for (std::size_t j = 1; j < samples.size(); ++j)
            samples[j] = std::min(samples[j], samples[j - 1]);
        if (!samples.empty()) samples.back() = 0.0;
        for (auto& s : samples) s = std::max(s, 0.0);
        c.table_ = std::move(samples);
        return c;
    }

    bool is_zero() const { return kind_ == Kind::zero; }

    Amps operator()(Volts v) const
    {
        switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::limited:
            if (v >= vdd_) return 0.0;
            if (v <= vdd_ - taper_) return i_lim_;
            return i_lim_ * (vdd_ - v) / taper_;
        case Kind::table: {
            if (table_.size() < 2 || v >= vdd_) return 0.0;
            if (v <= 0.0) return table_.front();
            const double x = v / vdd_ * static_cast<double>(table_.size() - 1);
            const auto j = static_cast<std::size_t>(x);
            const double frac = x - static_cast<double>(j);
            return table_[j] + frac * (table_[j + 1] - table_[j]);
        }
        }
        return 0.0;
    }

private:
    enum class Kind { zero, limited, table };
    Kind kind_ = Kind::zero;
    Amps i_lim_ = 0.0;
    Volts vdd_ = 0.0;
    Volts taper_ = 0.0;
    std::vector<Amps> table_;
};

struct CellOutput {
    bool matching = false;
    DriveCurve i_drive;
};

/// Knobs of the cell evaluation model.
struct CellModel {
    Volts taper = 0.3;                  // behavioral taper width below vdd
    double circuit_match_fraction = 0.1; // circuit match if i_drive(0) >= this * I_lim
    int circuit_grid_points = 61;        // tabulation of the circuit drive curve
};

/// The 9T4R pixel: two hybrid inverters set the window bounds, a 3T stack
/// (power-gating pMOS, output pMOS, output nMOS) injects matchline current.
struct TxlCell {
    HybridInverter inv_low;   // drives the gate of the output pMOS
    HybridInverter inv_high;  // drives the gate of the output nMOS
    MosfetParams m_men = MosfetParams::pmos();
    MosfetParams m_mlp = MosfetParams::pmos();
    MosfetParams m_mln = MosfetParams::nmos();
    CellMode mode = CellMode::matching;

    Volts vdd() const { return inv_low.vdd; }

    bool operator==(const TxlCell&) const = default;
};

/// Build a cell from its two programmable conductances and the shared
/// reference (polysilicon) conductance.
inline TxlCell make_txl_cell(Siemens g_m1, Siemens g_m2, Siemens g_ref, Siemens g_min, Siemens g_max,
                             double write_sigma = 0.0, const MosfetParams& pmos = MosfetParams::pmos(),
                             const MosfetParams& nmos = MosfetParams::nmos(), Volts vdd = 3.0)
{
    TxlCell c{
        HybridInverter{ResistiveElement::rram(g_m1, g_min, g_max, write_sigma), ResistiveElement::polysilicon(g_ref),
                       pmos, nmos, vdd},
        HybridInverter{ResistiveElement::rram(g_m2, g_min, g_max, write_sigma), ResistiveElement::polysilicon(g_ref),
                       pmos, nmos, vdd},
    };
    c.m_men = pmos;
    c.m_mlp = pmos;
    c.m_mln = nmos;
    return c;
}

/// Current limit of the power-gating pMOS biased at gate voltage `v_en`.
inline Amps enable_current_limit(const TxlCell& cell, Volts v_en)
{
    return saturation_current(cell.m_men, cell.vdd() - v_en);
}

/// Gate bias that makes the power-gating pMOS saturate at `i_lim`.
inline Volts enable_voltage_for(const MosfetParams& m_men, Volts vdd, Amps i_lim)
{
    return vdd - m_men.v_t - std::sqrt(2.0 * i_lim / m_men.k);
}

inline MatchWindow cell_window(const TxlCell& cell)
{
    if (cell.mode != CellMode::matching)
        throw ModeError("cell_window requires matching mode");
    return {inverter_threshold(cell.inv_low, false), inverter_threshold(cell.inv_high, false)};
}

inline TxlCell cell_set_mode(TxlCell cell, CellMode mode)
{
    cell.mode = mode;
    return cell;
}

namespace detail {

/// Series current of M_MEN -> M_MLP -> M_MLN into a matchline held at `v_ml`,
/// with the output-transistor gates at `g_p` and `g_n`.
inline Amps stack_current(const TxlCell& cell, Volts g_p, Volts g_n, Volts v_en, Volts v_ml)
{
    const Volts vdd = cell.vdd();
    if (v_ml >= vdd) return 0.0;
    const Amps i_cap = mosfet_current(cell.m_men, v_en - vdd, v_ml - vdd);
    if (!(i_cap > 0.0)) return 0.0;

    // Positive when the stack could carry more than `i`.
    auto surplus = [&](double i) {
        if (mosfet_current(cell.m_mln, g_n - v_ml, vdd - v_ml) < i) return -i;
        const Volts b = numerics::bracketed_root(
            [&](double x) { return mosfet_current(cell.m_mln, g_n - v_ml, x - v_ml) - i; }, v_ml, vdd, kNodeTol);
        if (mosfet_current(cell.m_mlp, g_p - vdd, b - vdd) < i) return -i;
        const Volts a = numerics::bracketed_root(
            [&](double x) { return mosfet_current(cell.m_mlp, g_p - x, b - x) - i; }, b, vdd, kNodeTol);
        return mosfet_current(cell.m_men, v_en - vdd, a - vdd) - i;
    };
    return numerics::bisect(surplus, 0.0, i_cap, i_cap * 1e-7);
}

inline CellOutput behavioral_output(const MatchWindow& w, Volts v_in, Amps i_lim, Volts vdd, Volts taper)
{
    if (!w.contains(v_in)) return {};
    return {true, DriveCurve::limited(i_lim, vdd, taper)};
}

} // namespace detail

/// Evaluate one query voltage against the cell.
inline CellOutput cell_evaluate(const TxlCell& cell, Volts v_in, Volts v_en, Fidelity fidelity,
                                const CellModel& model = {})
{
    if (cell.mode != CellMode::matching)
        throw ModeError("cell_evaluate requires matching mode");
    const Volts vdd = cell.vdd();
    if (v_in < 0.0 || v_in > vdd) throw OutOfRange("query voltage outside [0, vdd]");
    if (v_en < 0.0 || v_en > vdd) throw OutOfRange("enable voltage outside [0, vdd]");

    const Amps i_lim = enable_current_limit(cell, v_en);

    if (fidelity == Fidelity::behavioral)
        return detail::behavioral_output(cell_window(cell), v_in, i_lim, vdd, model.taper);

    const Volts g_p = inverter_vtc(cell.inv_low, v_in);
    const Volts g_n = inverter_vtc(cell.inv_high, v_in);
    const Amps i0 = detail::stack_current(cell, g_p, g_n, v_en, 0.0);
    if (!(i_lim > 0.0) || i0 < model.circuit_match_fraction * i_lim) return {};

    const int n = std::max(model.circuit_grid_points, 2);
    std::vector<Amps> samples(static_cast<std::size_t>(n));
    samples[0] = i0;
    for (int j = 1; j < n; ++j)
        samples[static_cast<std::size_t>(j)] = detail::stack_current(cell, g_p, g_n, v_en, vdd * j / (n - 1));
    return {true, DriveCurve::tabulated(std::move(samples), vdd)};
}

// ---------------------------------------------------------------------------
// 6T2R baseline (pre-charge paradigm, behavioral)
// ---------------------------------------------------------------------------

enum class Outcome { match, mismatch };

inline const char* to_string(Outcome o) { return o == Outcome::match ? "match" : "mismatch"; }

/// Two 1T1R voltage dividers set the bounds; two pull-down devices discharge
/// the pre-charged matchline on a mismatch.
struct SixT2RCell {
    Siemens g_lo = 20e-6;
    Siemens g_hi = 20e-6;
    MosfetParams divider_lo = MosfetParams::nmos();
    MosfetParams divider_hi = MosfetParams::nmos();
    MosfetParams pulldown_lo = MosfetParams::nmos();
    MosfetParams pulldown_hi = MosfetParams::nmos();
    Volts vdd = 3.0;
};

/// Input voltage at which the 1T1R divider (RRAM to supply, input-gated nMOS
/// to ground) pulls its midpoint node to vdd/2.
inline Volts divider_threshold(Siemens g, const MosfetParams& divider, Volts vdd)
{
    const Volts mid = 0.5 * vdd;
    auto excess = [&](double v_in) { return mosfet_current(divider, v_in, mid) - g * mid; };
    if (!(excess(vdd) > 0.0)) throw NoCrossing("divider never reaches vdd/2 for this conductance");
    return numerics::bisect(excess, 0.0, vdd, detail::kThresholdTol * 1e-2);
}

/// Inverse of divider_threshold.
inline Siemens divider_conductance(Volts v_threshold, const MosfetParams& divider, Volts vdd)
{
    const Volts mid = 0.5 * vdd;
    return mosfet_current(divider, v_threshold, mid) / mid;
}

inline MatchWindow sixt2r_window(const SixT2RCell& cell)
{
    return {divider_threshold(cell.g_lo, cell.divider_lo, cell.vdd),
            divider_threshold(cell.g_hi, cell.divider_hi, cell.vdd)};
}

/// Builds the 6T2R cell realizing `window`.
inline SixT2RCell make_sixt2r_cell(const MatchWindow& window, const MosfetParams& nmos = MosfetParams::nmos(),
                                   Volts vdd = 3.0)
{
    SixT2RCell c;
    c.divider_lo = c.divider_hi = c.pulldown_lo = c.pulldown_hi = nmos;
    c.vdd = vdd;
    c.g_lo = divider_conductance(window.v_low, nmos, vdd);
    c.g_hi = divider_conductance(window.v_high, nmos, vdd);
    return c;
}

/// Match leaves the pre-charged matchline untouched; mismatch is a discharge.
inline Outcome sixt2r_evaluate(const SixT2RCell& cell, Volts v_in)
{
    if (v_in < 0.0 || v_in > cell.vdd) throw OutOfRange("query voltage outside [0, vdd]");
    return sixt2r_window(cell).contains(v_in) ? Outcome::match : Outcome::mismatch;
}

} // namespace txl
