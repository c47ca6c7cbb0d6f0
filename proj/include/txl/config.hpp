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
#include "txl/energy.hpp"
#include "txl/io_util.hpp"

#include <CLI11.hpp>

#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace txl {

/// Everything a CLI run depends on. Loaded from a TOML-style key-value file
/// with dotted key names; every key has a default.
struct RunConfig {
    DeviceParams tech;
    std::optional<Siemens> g_ref;   // unset: geometric mean of the RRAM range
    ArrayConfig array;
    Amps i_lim = 5e-6;
    std::optional<Volts> v_en;      // unset: bias giving i_lim
    CellModel model;
    TimingConfig timing;
    MatchlineParams matchline;
    SenseAmp sense;
    Volts tol_v = 0.02;
    int max_iters = 10;
    EnergyTable energy = EnergyTable::defaults();
    double overhead = 0.0;
    Seconds frontend_start = 0.0;
    Seconds frontend_period = 1e-9;
    std::uint64_t seed = 1;
    Fidelity fidelity = Fidelity::behavioral;
    bool traces = false;
    int sweep_trials = 8;

    Siemens resolved_g_ref() const { return g_ref ? *g_ref : std::sqrt(tech.g_min * tech.g_max); }
    Volts resolved_v_en() const { return v_en ? *v_en : enable_voltage_for(tech.pmos, array.vdd_txl, i_lim); }

    DeviceParams device_params() const
    {
        DeviceParams d = tech;
        d.g_ref = resolved_g_ref();
        return d;
    }

    SearchSettings search_settings() const
    {
        SearchSettings s;
        s.v_en = resolved_v_en();
        s.timing = timing;
        s.matchline = matchline;
        s.matchline.vdd = array.vdd_txl;
        s.sense = sense;
        s.fidelity = fidelity;
        s.model = model;
        s.record_traces = traces;
        return s;
    }
};

namespace detail {

struct ConfigKey {
    std::string name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <typename Get>
ConfigKey real_key(std::string name, Get ref, double scale = 1.0)
{
    return {name,
            [ref, scale](const RunConfig& c) { return io::fmt_scaled(ref(const_cast<RunConfig&>(c)), scale); },
            [ref, scale, name](RunConfig& c, const std::string& v) { ref(c) = io::parse_scaled(v, scale, name); }};
}

template <typename Get>
ConfigKey int_key(std::string name, Get ref)
{
    return {name, [ref](const RunConfig& c) { return io::fmt(static_cast<long long>(ref(const_cast<RunConfig&>(c)))); },
            [ref, name](RunConfig& c, const std::string& v) {
                ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(io::parse_int(v, name));
            }};
}

inline ConfigKey energy_key(CellKind k, Outcome o, Regime r)
{
    std::string name = std::string("energy.") + to_string(k) + "." + to_string(o) + (r == Regime::low ? "_low_J" : "_high_J");
    return {name, [=](const RunConfig& c) { return io::fmt(c.energy.get(k, o, r)); },
            [=](RunConfig& c, const std::string& v) { c.energy.set(k, o, r, io::parse_double(v, name)); }};
}

inline const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        k.push_back(real_key("devices.nmos.vt_V", [](RunConfig& c) -> double& { return c.tech.nmos.v_t; }));
        k.push_back(real_key("devices.nmos.k_AV2", [](RunConfig& c) -> double& { return c.tech.nmos.k; }));
        k.push_back(real_key("devices.nmos.lambda_perV", [](RunConfig& c) -> double& { return c.tech.nmos.lambda; }));
        k.push_back(real_key("devices.pmos.vt_V", [](RunConfig& c) -> double& { return c.tech.pmos.v_t; }));
        k.push_back(real_key("devices.pmos.k_AV2", [](RunConfig& c) -> double& { return c.tech.pmos.k; }));
        k.push_back(real_key("devices.pmos.lambda_perV", [](RunConfig& c) -> double& { return c.tech.pmos.lambda; }));
        k.push_back(real_key("devices.rram.gmin_S", [](RunConfig& c) -> double& { return c.tech.g_min; }));
        k.push_back(real_key("devices.rram.gmax_S", [](RunConfig& c) -> double& { return c.tech.g_max; }));
        k.push_back(real_key("devices.rram.write_sigma", [](RunConfig& c) -> double& { return c.tech.write_sigma; }));
        k.push_back({"devices.poly.gref_S", [](const RunConfig& c) { return io::fmt(c.resolved_g_ref()); },
                     [](RunConfig& c, const std::string& v) { c.g_ref = io::parse_double(v, "devices.poly.gref_S"); }});
        k.push_back(int_key("array.columns", [](RunConfig& c) -> int& { return c.array.columns; }));
        k.push_back(int_key("array.rram_rows", [](RunConfig& c) -> int& { return c.array.rram_rows; }));
        k.push_back(int_key("array.poly_rows", [](RunConfig& c) -> int& { return c.array.poly_rows; }));
        k.push_back(real_key("array.vdd_txl_V", [](RunConfig& c) -> double& { return c.array.vdd_txl; }));
        k.push_back(real_key("array.vdd_prog_V", [](RunConfig& c) -> double& { return c.array.vdd_prog; }));
        k.push_back(real_key("cell.ilim_A", [](RunConfig& c) -> double& { return c.i_lim; }));
        k.push_back({"cell.ven_V", [](const RunConfig& c) { return io::fmt(c.resolved_v_en()); },
                     [](RunConfig& c, const std::string& v) { c.v_en = io::parse_double(v, "cell.ven_V"); }});
        k.push_back(real_key("cell.taper_V", [](RunConfig& c) -> double& { return c.model.taper; }));
        k.push_back(real_key("cell.circuit_match_fraction",
                             [](RunConfig& c) -> double& { return c.model.circuit_match_fraction; }));
        k.push_back(int_key("cell.circuit_grid_points", [](RunConfig& c) -> int& { return c.model.circuit_grid_points; }));
        k.push_back(real_key("timing.t_clock_ns", [](RunConfig& c) -> double& { return c.timing.t_clock; }, 1e-9));
        k.push_back(real_key("timing.t_evaluate_ns", [](RunConfig& c) -> double& { return c.timing.t_evaluate; }, 1e-9));
        k.push_back(
            real_key("timing.t_initialise_ns", [](RunConfig& c) -> double& { return c.timing.t_initialise; }, 1e-9));
        k.push_back(real_key("timing.dt_ps", [](RunConfig& c) -> double& { return c.timing.dt; }, 1e-12));
        k.push_back(real_key("matchline.c_ml_fF", [](RunConfig& c) -> double& { return c.matchline.c_ml; }, 1e-15));
        k.push_back(real_key("matchline.r_leak_Ohm", [](RunConfig& c) -> double& { return c.matchline.r_leak; }));
        k.push_back(real_key("matchline.r_reset_Ohm", [](RunConfig& c) -> double& { return c.matchline.r_leak_reset; }));
        k.push_back(real_key("sense.vth_V", [](RunConfig& c) -> double& { return c.sense.v_th; }));
        k.push_back(real_key("compiler.tol_V", [](RunConfig& c) -> double& { return c.tol_v; }));
        k.push_back(int_key("compiler.max_iters", [](RunConfig& c) -> int& { return c.max_iters; }));
        for (auto kind : {CellKind::txl9t4r, CellKind::sixt2r})
            for (auto o : {Outcome::match, Outcome::mismatch})
                for (auto r : {Regime::low, Regime::high}) k.push_back(energy_key(kind, o, r));
        k.push_back(real_key("energy.overhead", [](RunConfig& c) -> double& { return c.overhead; }));
        k.push_back(real_key("frontend.start_ns", [](RunConfig& c) -> double& { return c.frontend_start; }, 1e-9));
        k.push_back(real_key("frontend.period_ns", [](RunConfig& c) -> double& { return c.frontend_period; }, 1e-9));
        k.push_back(int_key("run.seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
        k.push_back({"run.fidelity", [](const RunConfig& c) { return std::string(to_string(c.fidelity)); },
                     [](RunConfig& c, const std::string& v) {
                         if (v == "behavioral") c.fidelity = Fidelity::behavioral;
                         else if (v == "circuit") c.fidelity = Fidelity::circuit;
                         else throw ParseError("run.fidelity: expected behavioral or circuit, got '" + v + "'");
                     }});
        k.push_back({"run.traces", [](const RunConfig& c) { return std::string(c.traces ? "on" : "off"); },
                     [](RunConfig& c, const std::string& v) {
                         if (v == "on" || v == "true") c.traces = true;
                         else if (v == "off" || v == "false") c.traces = false;
                         else throw ParseError("run.traces: expected on or off, got '" + v + "'");
                     }});
        k.push_back(int_key("sweep.trials", [](RunConfig& c) -> int& { return c.sweep_trials; }));
        return k;
    }();
    return keys;
}

/// Key/values as read by the TOML reader, with section markers removed.
inline std::vector<CLI::ConfigItem> read_items(std::istream& in)
{
    std::vector<CLI::ConfigItem> items;
    for (auto& it : CLI::ConfigTOML().from_config(in))
        if (it.name != "++" && it.name != "--") items.push_back(std::move(it));
    return items;
}

} // namespace detail

inline void validate(const RunConfig& c)
{
    validate(c.tech.nmos);
    validate(c.tech.pmos);
    if (!(c.tech.g_min > 0.0 && c.tech.g_min < c.tech.g_max)) throw OutOfRange("devices.rram needs 0 < gmin < gmax");
    if (!(c.tech.write_sigma >= 0.0)) throw OutOfRange("devices.rram.write_sigma must be non-negative");
    if (!(c.resolved_g_ref() > 0.0)) throw OutOfRange("devices.poly.gref_S must be positive");
    if (c.array.columns < 1 || c.array.rram_rows < 0 || c.array.poly_rows < 0 || c.array.total_rows() < 1)
        throw OutOfRange("array dimensions must be positive");
    if (!(c.array.vdd_txl > 0.0)) throw OutOfRange("array.vdd_txl_V must be positive");
    const Volts v_en = c.resolved_v_en();
    if (!(v_en >= 0.0 && v_en <= c.array.vdd_txl)) throw OutOfRange("cell.ven_V outside [0, vdd]");
    if (!(c.model.taper > 0.0)) throw OutOfRange("cell.taper_V must be positive");
    if (c.model.circuit_grid_points < 2) throw OutOfRange("cell.circuit_grid_points must be >= 2");
    validate(c.timing);
    if (!(c.matchline.c_ml > 0.0 && c.matchline.r_leak > 0.0 && c.matchline.r_leak_reset > 0.0))
        throw OutOfRange("matchline values must be positive");
    validate(c.sense, c.array.vdd_txl);
    if (!(c.tol_v >= 0.0)) throw OutOfRange("compiler.tol_V must be non-negative");
    if (c.max_iters < 1) throw OutOfRange("compiler.max_iters must be >= 1");
    if (!(c.overhead >= 0.0)) throw OutOfRange("energy.overhead must be non-negative");
    if (!(c.frontend_period > 0.0)) throw OutOfRange("frontend.period_ns must be positive");
    if (c.sweep_trials < 1) throw OutOfRange("sweep.trials must be >= 1");
}

/// Parse a config file body. Unknown or repeated keys are rejected.
inline RunConfig parse_run_config(std::istream& in)
{
    RunConfig cfg;
    const auto& keys = detail::config_keys();
    std::set<std::string> seen;
    for (const auto& item : detail::read_items(in)) {
        const std::string name = item.fullname();
        auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.name == name; });
        if (it == keys.end()) throw ParseError("unknown config key '" + name + "'");
        if (!seen.insert(name).second) throw ParseError("config key '" + name + "' given twice");
        if (item.inputs.size() != 1) throw ParseError("config key '" + name + "' needs exactly one value");
        it->set(cfg, item.inputs.front());
    }
    validate(cfg);
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& p)
{
    std::istringstream in(io::read_file(p));
    return parse_run_config(in);
}

/// Effective config, one `key = value` line per key, suitable for reloading.
inline std::string to_config_text(const RunConfig& c)
{
    std::string s;
    for (const auto& k : detail::config_keys()) {
        std::string v = k.get(c);
        if (k.name == "run.fidelity" || k.name == "run.traces") v = "\"" + v + "\"";
        s += k.name + " = " + v + "\n";
    }
    return s;
}

inline std::vector<std::string> config_key_names()
{
    std::vector<std::string> out;
    for (const auto& k : detail::config_keys()) out.push_back(k.name);
    return out;
}

} // namespace txl
