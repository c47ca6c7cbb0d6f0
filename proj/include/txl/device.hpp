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
#include "txl/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace txl {

// ---------------------------------------------------------------------------
// Resistive elements
// ---------------------------------------------------------------------------

enum class ElementKind { rram, polysilicon };

inline const char* to_string(ElementKind k) { return k == ElementKind::rram ? "rram" : "polysilicon"; }

/// A two-terminal resistive device. RRAM elements are programmable inside
/// [g_min, g_max]; polysilicon elements are fixed at construction.
class ResistiveElement {
public:
    static ResistiveElement rram(Siemens g, Siemens g_min, Siemens g_max, double write_sigma = 0.0)
    {
        if (!(g_min > 0.0) || !(g_min <= g_max))
            throw OutOfRange("rram range requires 0 < g_min <= g_max");
        if (g < g_min || g > g_max)
            throw OutOfRange("rram conductance " + std::to_string(g) + " S outside [g_min, g_max]");
        if (!(write_sigma >= 0.0))
            throw OutOfRange("write_sigma must be non-negative");
        return ResistiveElement(ElementKind::rram, g, g_min, g_max, write_sigma);
    }

    static ResistiveElement polysilicon(Siemens g)
    {
        if (!(g > 0.0))
            throw OutOfRange("polysilicon conductance must be positive");
        return ResistiveElement(ElementKind::polysilicon, g, g, g, 0.0);
    }

    ElementKind kind() const { return kind_; }
    Siemens conductance() const { return g_; }
    Siemens g_min() const { return g_min_; }
    Siemens g_max() const { return g_max_; }
    double write_sigma() const { return sigma_; }

    bool operator==(const ResistiveElement&) const = default;

private:
    ResistiveElement(ElementKind k, Siemens g, Siemens lo, Siemens hi, double sigma)
        : kind_(k), g_(g), g_min_(lo), g_max_(hi), sigma_(sigma) {}

    ElementKind kind_;
    Siemens g_;
    Siemens g_min_;
    Siemens g_max_;
    double sigma_;

    friend ResistiveElement rram_write(const ResistiveElement&, Siemens, std::uint64_t);
};

/// Write `target_g` with multiplicative lognormal error exp(N(0, write_sigma)),
/// clamped to the device range. Deterministic in `rng_seed`.
inline ResistiveElement rram_write(const ResistiveElement& elem, Siemens target_g, std::uint64_t rng_seed)
{
    if (elem.kind() != ElementKind::rram)
        throw ImmutableDevice("polysilicon elements cannot be written");
    if (target_g < elem.g_min() || target_g > elem.g_max())
        throw OutOfRange("write target " + std::to_string(target_g) + " S outside [g_min, g_max]");

    ResistiveElement out = elem;
    if (elem.write_sigma() == 0.0) {
        out.g_ = target_g;
        return out;
    }
    std::mt19937_64 gen(rng_seed);
    std::normal_distribution<double> noise(0.0, elem.write_sigma());
    out.g_ = std::clamp(target_g * std::exp(noise(gen)), elem.g_min(), elem.g_max());
    return out;
}

inline Siemens rram_read(const ResistiveElement& elem) { return elem.conductance(); }

// ---------------------------------------------------------------------------
// MOSFET
// ---------------------------------------------------------------------------

enum class Polarity { n, p };

/// Long-channel square-law parameters. `v_t` is a magnitude for both
/// polarities; `k` absorbs W/L.
struct MosfetParams {
    Polarity polarity = Polarity::n;
    Volts v_t = 0.8;
    double k = 200e-6;      // A/V^2
    double lambda = 0.0;    // 1/V

    bool operator==(const MosfetParams&) const = default;

    static MosfetParams nmos(Volts vt = 0.8, double k = 200e-6, double lambda = 0.0)
    {
        return {Polarity::n, vt, k, lambda};
    }
    static MosfetParams pmos(Volts vt = 0.8, double k = 100e-6, double lambda = 0.0)
    {
        return {Polarity::p, vt, k, lambda};
    }
};

inline void validate(const MosfetParams& m)
{
    if (!(m.v_t > 0.0) || !(m.k > 0.0) || !(m.lambda >= 0.0))
        throw OutOfRange("mosfet parameters require v_t > 0, k > 0, lambda >= 0");
}

namespace detail {

// n-type square law for v_ds >= 0
inline Amps square_law(const MosfetParams& m, Volts v_gs, Volts v_ds)
{
    const double v_ov = v_gs - m.v_t;
    if (v_ov <= 0.0 || v_ds <= 0.0) return 0.0;
    const double clm = 1.0 + m.lambda * v_ds;
    if (v_ds < v_ov) return m.k * (v_ov * v_ds - 0.5 * v_ds * v_ds) * clm;
    return 0.5 * m.k * v_ov * v_ov * clm;
}

inline Amps n_current(const MosfetParams& m, Volts v_gs, Volts v_ds)
{
    if (v_ds >= 0.0) return square_law(m, v_gs, v_ds);
    // drain and source swap roles
    return -square_law(m, v_gs - v_ds, -v_ds);
}

} // namespace detail

/// Drain current of a square-law MOSFET.
///
/// nMOS: terminal voltages as usual, positive result is drain-to-source.
/// pMOS: pass v_gs and v_ds as usual (both negative when conducting); the
/// positive result is the source-to-drain current.
inline Amps mosfet_current(const MosfetParams& params, Volts v_gs, Volts v_ds)
{
    if (params.polarity == Polarity::n) return detail::n_current(params, v_gs, v_ds);
    return detail::n_current(params, -v_gs, -v_ds);
}

/// Saturation current for a given gate overdrive source (|v_gs|), ignoring
/// channel-length modulation.
inline Amps saturation_current(const MosfetParams& m, Volts v_gs_magnitude)
{
    const double v_ov = v_gs_magnitude - m.v_t;
    return v_ov > 0.0 ? 0.5 * m.k * v_ov * v_ov : 0.0;
}

// ---------------------------------------------------------------------------
// Hybrid RRAM-CMOS inverter
// ---------------------------------------------------------------------------

/// CMOS inverter with resistive source degeneration: supply -> top element ->
/// pMOS -> output -> nMOS -> bottom element -> ground.
struct HybridInverter {
    ResistiveElement top_element;
    ResistiveElement bottom_element;
    MosfetParams pmos = MosfetParams::pmos();
    MosfetParams nmos = MosfetParams::nmos();
    Volts vdd = 3.0;

    bool operator==(const HybridInverter&) const = default;
};

namespace detail {

inline constexpr double kNodeTol = 1e-9;      // internal source-node solves
inline constexpr double kOutputTol = 1e-7;    // VTC output voltage
inline constexpr double kThresholdTol = 1e-5; // switching-point bisection

/// Current from the output node through the nMOS and bottom element to ground.
inline Amps pulldown_current(const HybridInverter& inv, Volts v_in, Volts v_out)
{
    if (v_out <= 0.0) return 0.0;
    const double g = inv.bottom_element.conductance();
    const double v_s = numerics::bracketed_root(
        [&](double s) { return g * s - mosfet_current(inv.nmos, v_in - s, v_out - s); },
        0.0, v_out, kNodeTol);
    return g * v_s;
}

/// Current from the supply through the top element and pMOS into the output node.
inline Amps pullup_current(const HybridInverter& inv, Volts v_in, Volts v_out)
{
    if (v_out >= inv.vdd) return 0.0;
    const double g = inv.top_element.conductance();
    // pMOS source node between v_out and vdd
    const double v_s = numerics::bracketed_root(
        [&](double s) { return g * (inv.vdd - s) - mosfet_current(inv.pmos, v_in - s, v_out - s); },
        v_out, inv.vdd, kNodeTol);
    return g * (inv.vdd - v_s);
}

inline void validate(const HybridInverter& inv)
{
    if (!(inv.vdd > 0.0)) throw OutOfRange("inverter vdd must be positive");
    if (!(inv.top_element.conductance() > 0.0) || !(inv.bottom_element.conductance() > 0.0))
        throw OutOfRange("inverter elements need positive conductance");
    txl::validate(inv.pmos);
    txl::validate(inv.nmos);
}

/// Switching point without the sampled monotonicity guard. The square-law
/// stack makes the VTC non-increasing, so the guard only matters for
/// user-supplied parameter sets.
inline Volts switching_point(const HybridInverter& inv)
{
    const Volts mid = 0.5 * inv.vdd;
    auto excess = [&](double v_in) { return pullup_current(inv, v_in, mid) - pulldown_current(inv, v_in, mid); };
    if (!(excess(0.0) > 0.0) || !(excess(inv.vdd) < 0.0))
        throw NoCrossing("inverter transfer curve never crosses vdd/2");
    return numerics::bisect(excess, 0.0, inv.vdd, kThresholdTol);
}

} // namespace detail

/// DC output voltage for input `v_in`, solving current continuity through the
/// series stack to within 0.1 uV.
inline Volts inverter_vtc(const HybridInverter& inv, Volts v_in)
{
    if (v_in < 0.0 || v_in > inv.vdd)
        throw OutOfRange("inverter input outside [0, vdd]");
    auto excess = [&](double v_out) {
        return detail::pullup_current(inv, v_in, v_out) - detail::pulldown_current(inv, v_in, v_out);
    };
    const double lo = excess(0.0);
    const double hi = excess(inv.vdd);
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi > 0.0)
        throw NoConvergence("inverter DC solve has no bracketed root");
    return numerics::bisect(excess, 0.0, inv.vdd, detail::kOutputTol);
}

/// Input voltage at which the transfer curve crosses vdd/2.
///
/// With `check_monotone` set, the VTC is first sampled on a coarse grid and a
/// rising segment raises NoCrossing.
inline Volts inverter_threshold(const HybridInverter& inv, bool check_monotone = true)
{
    detail::validate(inv);
    if (check_monotone) {
        constexpr int kSamples = 12;
        Volts prev = inverter_vtc(inv, 0.0);
        for (int i = 1; i <= kSamples; ++i) {
            const Volts v = inverter_vtc(inv, inv.vdd * i / kSamples);
            if (v > prev + detail::kOutputTol * 10.0)
                throw NoCrossing("inverter transfer curve is not monotone");
            prev = v;
        }
    }
    return detail::switching_point(inv);
}

} // namespace txl
