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

#include "txl/cell.hpp"
#include "txl/errors.hpp"
#include "txl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace txl {

/// One initialise/evaluate clock cycle.
struct TimingConfig {
    Seconds t_clock = 15e-9;
    Seconds t_evaluate = 5e-9;
    Seconds t_initialise = 10e-9;
    Seconds dt = 10e-12;

    bool operator==(const TimingConfig&) const = default;
};

inline void validate(const TimingConfig& t)
{
    if (!(t.t_evaluate > 0.0) || !(t.t_initialise >= 0.0) || !(t.dt > 0.0))
        throw OutOfRange("timing values must be positive");
    if (std::abs(t.t_evaluate + t.t_initialise - t.t_clock) > 1e-6 * t.t_clock)
        throw OutOfRange("t_evaluate + t_initialise must equal t_clock");
    if (t.dt > t.t_evaluate / 100.0 * (1.0 + 1e-12))
        throw OutOfRange("dt must not exceed t_evaluate / 100");
}

struct MatchlineParams {
    Farads c_ml = 250e-15;
    Ohms r_leak = 1e6;
    Ohms r_leak_reset = 4e3; // tau = 1 ns: under 1 mV left after a 10 ns initialise from 3 V
    Volts vdd = 3.0;

    bool operator==(const MatchlineParams&) const = default;
};

struct TracePoint {
    Seconds t;
    Volts v;
    bool operator==(const TracePoint&) const = default;
};

struct MatchlineState {
    MatchlineParams params;
    Volts v = 0.0;
    Seconds t = 0.0;
    std::vector<TracePoint> trace{};
};

/// Integrates dv/dt = (sum_i i_drive(v) - v / r_leak) / c_ml over t_evaluate
/// with fixed-step RK4, clamping to [0, vdd] after every step.
inline MatchlineState matchline_evaluate(MatchlineState ml, std::span<const CellOutput> outputs,
                                         const TimingConfig& timing, bool record_trace = true)
{
    std::vector<const DriveCurve*> sources;
    for (const auto& o : outputs)
        if (o.matching && !o.i_drive.is_zero()) sources.push_back(&o.i_drive);

    const auto& p = ml.params;
    auto dvdt = [&](double, double v) {
        double i = 0.0;
        for (const auto* s : sources) i += (*s)(v);
        return (i - v / p.r_leak) / p.c_ml;
    };

    const auto steps = static_cast<long>(std::llround(timing.t_evaluate / timing.dt));
    const double h = timing.t_evaluate / static_cast<double>(steps);
    const Seconds t0 = ml.t;
    if (record_trace) {
        ml.trace.reserve(ml.trace.size() + static_cast<std::size_t>(steps) + 1);
        if (ml.trace.empty() || ml.trace.back().t < t0) ml.trace.push_back({t0, ml.v});
    }
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        ml.v = std::clamp(numerics::rk4_step(dvdt, t, ml.v, h), 0.0, p.vdd);
        if (record_trace) ml.trace.push_back({t0 + h * static_cast<double>(s + 1), ml.v});
    }
    ml.t = t0 + timing.t_evaluate;
    return ml;
}

inline Seconds reset_time_constant(const MatchlineParams& p) { return p.r_leak_reset * p.c_ml; }

/// Discharge through the reset resistance for `duration`.
inline MatchlineState matchline_reset(MatchlineState ml, Seconds duration, bool record_trace = true)
{
    if (duration < 0.0) throw OutOfRange("reset duration must be non-negative");
    ml.v *= std::exp(-duration / reset_time_constant(ml.params));
    ml.t += duration;
    if (record_trace && duration > 0.0) ml.trace.push_back({ml.t, ml.v});
    return ml;
}

enum class SenseResult { hit, miss };

struct SenseAmp {
    Volts v_th = 1.4;
    Volts hit_level = 0.0;   // latch output on a hit
    Volts miss_level = 5.0;

    Volts output_voltage(SenseResult r) const { return r == SenseResult::hit ? hit_level : miss_level; }
};

inline void validate(const SenseAmp& sa, Volts vdd)
{
    if (!(sa.v_th > 0.0) || !(sa.v_th < vdd)) throw OutOfRange("sense threshold must lie in (0, vdd)");
}

/// Hit iff the sampled matchline voltage strictly exceeds v_th.
inline SenseResult sense(Volts v_ml, const SenseAmp& sa)
{
    return v_ml > sa.v_th ? SenseResult::hit : SenseResult::miss;
}

/// Sampled matchline voltage for N = 0..columns identical matching cells.
/// Maps a sense threshold onto an "at least k matches" rule.
class CountLaw {
public:
    CountLaw() = default;

    CountLaw(int columns, Amps i_lim, Volts taper, const MatchlineParams& params, const TimingConfig& timing)
    {
        const CellOutput one{true, DriveCurve::limited(i_lim, params.vdd, taper)};
        const std::vector<CellOutput> all(static_cast<std::size_t>(columns), one);
        v_.reserve(static_cast<std::size_t>(columns) + 1);
        for (int n = 0; n <= columns; ++n) {
            const auto st = matchline_evaluate(MatchlineState{params}, std::span(all).first(static_cast<std::size_t>(n)),
                                               timing, false);
            v_.push_back(st.v);
        }
    }

    int columns() const { return static_cast<int>(v_.size()) - 1; }
    Volts voltage(int n) const { return v_.at(static_cast<std::size_t>(n)); }
    const std::vector<Volts>& voltages() const { return v_; }

    /// Smallest match count whose sampled voltage senses as a hit at `v_th`;
    /// columns() + 1 when no count reaches it.
    int k_boundary(Volts v_th) const
    {
        for (std::size_t n = 0; n < v_.size(); ++n)
            if (v_[n] > v_th) return static_cast<int>(n);
        return columns() + 1;
    }

    /// Sense threshold that implements "at least k matches": the midpoint
    /// between the k-1 and k voltages.
    Volts boundary_voltage(int k) const
    {
        if (k < 1 || k > columns()) throw OutOfRange("k must lie in [1, columns]");
        return 0.5 * (voltage(k - 1) + voltage(k));
    }

private:
    std::vector<Volts> v_;
};

} // namespace txl
