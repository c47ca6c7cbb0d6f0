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
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace txl {

struct Template {
    int row = 0;
    std::vector<MatchWindow> windows;
    std::string label;
};

using ConductanceMap = std::map<DeviceAddress, Siemens>;

/// Inverter whose top element is an RRAM device and whose bottom element is
/// the polysilicon reference, as used for every window bound.
inline HybridInverter reference_inverter(const DeviceParams& tech, Volts vdd, Siemens g_top)
{
    return {ResistiveElement::rram(g_top, tech.g_min, tech.g_max, tech.write_sigma),
            ResistiveElement::polysilicon(tech.g_ref), tech.pmos, tech.nmos, vdd};
}

/// Switching points at the two ends of the RRAM range.
inline std::pair<Volts, Volts> achievable_range(const HybridInverter& inv)
{
    HybridInverter lo = inv, hi = inv;
    lo.top_element = ResistiveElement::rram(inv.top_element.g_min(), inv.top_element.g_min(), inv.top_element.g_max());
    hi.top_element = ResistiveElement::rram(inv.top_element.g_max(), inv.top_element.g_min(), inv.top_element.g_max());
    return {inverter_threshold(lo, false), inverter_threshold(hi, false)};
}

/// Top-element conductance that places the inverter's switching point at
/// `target_v`.
///
/// Solved directly: at output vdd/2 the pull-down current is fixed by the
/// target, and the pull-up source node that carries that current fixes the
/// required conductance.
inline Siemens threshold_to_conductance(Volts target_v, const HybridInverter& inverter_template)
{
    const HybridInverter& inv = inverter_template;
    const Volts vdd = inv.vdd;
    const Volts mid = 0.5 * vdd;
    auto fail = [&]() -> Unachievable {
        const auto [lo, hi] = achievable_range(inv);
        return Unachievable("threshold " + std::to_string(target_v) + " V outside achievable range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "] V",
                            lo, hi);
    };
    if (!(target_v > 0.0 && target_v < vdd)) throw fail();

    const Amps i = detail::pulldown_current(inv, target_v, mid);
    if (!(i > 0.0)) throw fail();
    auto pmos_i = [&](double s) { return mosfet_current(inv.pmos, target_v - s, mid - s); };
    if (pmos_i(vdd) < i) throw fail();
    const Volts s = numerics::bracketed_root([&](double x) { return pmos_i(x) - i; }, mid, vdd, detail::kNodeTol * 1e-3);
    const Siemens g = i / (vdd - s);
    // endpoints come from a bisected threshold, so allow their residue
    constexpr double slack = 1e-3;
    const Siemens g_min = inv.top_element.g_min(), g_max = inv.top_element.g_max();
    if (g < g_min * (1.0 - slack) || g > g_max * (1.0 + slack)) throw fail();
    return std::clamp(g, g_min, g_max);
}

/// Conductance targets for one template row: m1 realizes v_low through the
/// low inverter, m2 realizes v_high through the high inverter. Reference
/// elements are polysilicon and carry no entries.
inline ConductanceMap compile_template(const Template& t, const DeviceParams& tech, Volts vdd)
{
    ConductanceMap map;
    const HybridInverter inv = reference_inverter(tech, vdd, tech.g_ref);
    for (std::size_t c = 0; c < t.windows.size(); ++c) {
        const auto& w = t.windows[c];
        const int col = static_cast<int>(c);
        for (auto [which, v] : {std::pair{Which::m1, w.v_low}, std::pair{Which::m2, w.v_high}}) {
            try {
                map[{t.row, col, which}] = threshold_to_conductance(v, inv);
            } catch (const Unachievable& e) {
                throw Unachievable("cell (" + std::to_string(t.row) + ", " + std::to_string(col) + ") " +
                                       to_string(which) + ": " + e.what(),
                                   e.achievable_low, e.achievable_high);
            }
        }
    }
    return map;
}

inline void validate(const Template& t, int columns, Volts vdd)
{
    if (static_cast<int>(t.windows.size()) != columns)
        throw LengthMismatch("template row " + std::to_string(t.row) + " has " + std::to_string(t.windows.size()) +
                             " windows, expected " + std::to_string(columns));
    for (std::size_t c = 0; c < t.windows.size(); ++c) {
        const auto& w = t.windows[c];
        if (!(w.v_low >= 0.0 && w.v_low <= vdd && w.v_high >= 0.0 && w.v_high <= vdd))
            throw OutOfRange("cell (" + std::to_string(t.row) + ", " + std::to_string(c) + ") bound outside [0, vdd]");
    }
}

inline ConductanceMap compile_templates(const std::vector<Template>& templates, const ArrayConfig& cfg,
                                        const DeviceParams& tech)
{
    ConductanceMap all;
    for (const auto& t : templates) {
        validate(t, cfg.columns, cfg.vdd_txl);
        if (t.row < 0 || t.row >= cfg.rram_rows)
            throw AddressOutOfRange("template row " + std::to_string(t.row) + " is not an RRAM row");
        all.merge(compile_template(t, tech, cfg.vdd_txl));
    }
    return all;
}

struct DeviceVerify {
    DeviceAddress address;
    int iterations = 0;
    Volts window_error = 0.0;
    bool converged = false;
};

struct VerifyReport {
    std::vector<DeviceVerify> devices;

    int max_iterations() const
    {
        int m = 0;
        for (const auto& d : devices) m = std::max(m, d.iterations);
        return m;
    }
    Volts max_window_error() const
    {
        Volts m = 0.0;
        for (const auto& d : devices) m = std::max(m, d.window_error);
        return m;
    }
    std::size_t converged_count() const
    {
        return static_cast<std::size_t>(std::count_if(devices.begin(), devices.end(),
                                                      [](const auto& d) { return d.converged; }));
    }
    bool all_converged() const { return converged_count() == devices.size(); }
};

/// Raised when devices remain out of tolerance; the array keeps whatever
/// state the loop reached.
class VerifyFailed : public Error {
public:
    explicit VerifyFailed(VerifyReport r) : Error(describe(r)), report(std::move(r)) {}
    VerifyReport report;

private:
    static std::string describe(const VerifyReport& r)
    {
        std::string s = std::to_string(r.devices.size() - r.converged_count()) + " device(s) out of tolerance:";
        int listed = 0;
        for (const auto& d : r.devices) {
            if (d.converged) continue;
            if (++listed > 16) {
                s += " ...";
                break;
            }
            s += " (" + std::to_string(d.address.row) + "," + std::to_string(d.address.col) + "," +
                 to_string(d.address.which) + ")";
        }
        return s;
    }
};

/// Write, read back, and rewrite each device until the bound it realizes is
/// within `tol_v` of the bound its target conductance realizes.
inline VerifyReport program_and_verify(AcamArray& array, const ConductanceMap& map, Volts tol_v, int max_iters,
                                       std::uint64_t seed)
{
    if (array.mode() != CellMode::programming) throw ModeError("program_and_verify requires programming mode");
    VerifyReport report;
    report.devices.reserve(map.size());
    for (const auto& [addr, target] : map) {
        address_decode(array.config(), addr);
        const Volts desired = array.bound_threshold(target);
        DeviceVerify dv{addr};
        for (int it = 1; it <= max_iters; ++it) {
            array.program_device(addr, target,
                                 numerics::mix_seed(seed, static_cast<std::uint64_t>(addr.row),
                                                    static_cast<std::uint64_t>(addr.col),
                                                    static_cast<std::uint64_t>(addr.which), static_cast<std::uint64_t>(it)));
            dv.iterations = it;
            dv.window_error = std::abs(array.bound_threshold(rram_read(array.element(addr))) - desired);
            if (dv.window_error <= tol_v) {
                dv.converged = true;
                break;
            }
        }
        report.devices.push_back(dv);
    }
    if (!report.all_converged()) throw VerifyFailed(std::move(report));
    return report;
}

} // namespace txl
