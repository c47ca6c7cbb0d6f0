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

#include "txl/compiler.hpp"
#include "txl/energy.hpp"
#include "txl/frontend.hpp"
#include "txl/io_util.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace txl::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Template CSV: row,col,v_low_V,v_high_V
// ---------------------------------------------------------------------------

inline std::string write_templates(const std::vector<Template>& templates)
{
    std::string s = "row,col,v_low_V,v_high_V\n";
    for (const auto& t : templates)
        for (std::size_t c = 0; c < t.windows.size(); ++c)
            s += fmt(t.row) + "," + fmt(static_cast<int>(c)) + "," + fmt(t.windows[c].v_low) + "," +
                 fmt(t.windows[c].v_high) + "\n";
    return s;
}

/// Rows are returned in ascending order; each listed row must provide every
/// column exactly once.
inline std::vector<Template> read_templates(const std::string& text, int columns, Volts vdd)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("template file is empty");
    std::map<int, std::map<int, MatchWindow>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        const std::string where = "template line " + std::to_string(lineno);
        if (f.size() != 4) throw ParseError(where + ": expected 4 fields");
        const int row = static_cast<int>(parse_int(f[0], where));
        const int col = static_cast<int>(parse_int(f[1], where));
        const std::string cell = "template cell (" + std::to_string(row) + ", " + std::to_string(col) + ")";
        const MatchWindow w{parse_double(f[2], cell), parse_double(f[3], cell)};
        if (col < 0 || col >= columns) throw ParseError(cell + ": column outside [0, " + std::to_string(columns) + ")");
        if (row < 0) throw ParseError(cell + ": negative row");
        if (!(w.v_low >= 0.0 && w.v_low <= vdd)) throw ParseError(cell + ": v_low outside [0, vdd]");
        if (!(w.v_high >= 0.0 && w.v_high <= vdd)) throw ParseError(cell + ": v_high outside [0, vdd]");
        if (!rows[row].emplace(col, w).second) throw ParseError(cell + ": listed twice");
    }
    std::vector<Template> out;
    for (auto& [row, cols] : rows) {
        if (static_cast<int>(cols.size()) != columns)
            throw ParseError("template row " + std::to_string(row) + " has " + std::to_string(cols.size()) +
                             " columns, expected " + std::to_string(columns));
        Template t{row, {}, "row" + std::to_string(row)};
        for (auto& [c, w] : cols) t.windows.push_back(w);
        out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conductance map CSV: row,col,which,target_uS
// ---------------------------------------------------------------------------

inline std::string write_conductance_map(const ConductanceMap& map)
{
    std::string s = "row,col,which,target_uS\n";
    for (const auto& [a, g] : map)
        s += fmt(a.row) + "," + fmt(a.col) + "," + to_string(a.which) + "," + fmt_scaled(g, 1e-6) + "\n";
    return s;
}

inline Which parse_which(const std::string& s, const std::string& where)
{
    if (s == "m1") return Which::m1;
    if (s == "m2") return Which::m2;
    throw ParseError(where + ": expected m1 or m2, got '" + s + "'");
}

inline ConductanceMap read_conductance_map(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    ConductanceMap map;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        const std::string where = "conductance map line " + std::to_string(lineno);
        if (f.size() != 4) throw ParseError(where + ": expected 4 fields");
        DeviceAddress a{static_cast<int>(parse_int(f[0], where)), static_cast<int>(parse_int(f[1], where)),
                        parse_which(f[2], where)};
        map[a] = parse_scaled(f[3], 1e-6, where);
    }
    return map;
}

// ---------------------------------------------------------------------------
// Array state JSON
// ---------------------------------------------------------------------------

inline json array_to_json(const AcamArray& array)
{
    const auto& cfg = array.config();
    json j;
    j["config"] = {{"columns", cfg.columns},
                   {"rram_rows", cfg.rram_rows},
                   {"poly_rows", cfg.poly_rows},
                   {"vdd_txl_V", cfg.vdd_txl},
                   {"vdd_prog_V", cfg.vdd_prog}};
    j["mode"] = array.mode() == CellMode::matching ? "matching" : "programming";
    json devices = json::array();
    for (int r = 0; r < array.rows(); ++r)
        for (int c = 0; c < array.columns(); ++c)
            for (auto w : {Which::m1, Which::m2}) {
                const auto& e = array.element({r, c, w});
                devices.push_back({{"row", r},
                                   {"col", c},
                                   {"which", to_string(w)},
                                   {"conductance_S", e.conductance()},
                                   {"kind", to_string(e.kind())}});
            }
    j["devices"] = std::move(devices);
    return j;
}

inline std::string write_array(const AcamArray& array) { return array_to_json(array).dump(2) + "\n"; }

/// Rebuild an array from its state file. Device technology (MOSFETs, RRAM
/// range, reference conductance) comes from the run config.
inline AcamArray read_array(const std::string& text, const DeviceParams& tech)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("array file: ") + e.what());
    }
    try {
        const auto& jc = j.at("config");
        ArrayConfig cfg{jc.at("columns").get<int>(), jc.at("rram_rows").get<int>(), jc.at("poly_rows").get<int>(),
                        jc.at("vdd_txl_V").get<double>(), jc.at("vdd_prog_V").get<double>()};
        AcamArray array(cfg, tech);
        array.enter_programming_mode();
        for (const auto& d : j.at("devices")) {
            const DeviceAddress a{d.at("row").get<int>(), d.at("col").get<int>(),
                                  parse_which(d.at("which").get<std::string>(), "array file")};
            const double g = d.at("conductance_S").get<double>();
            const std::string kind = d.at("kind").get<std::string>();
            if (kind == "rram")
                array.restore_device(a, ResistiveElement::rram(g, tech.g_min, tech.g_max, tech.write_sigma));
            else if (kind == "polysilicon")
                array.restore_device(a, ResistiveElement::polysilicon(g));
            else
                throw ParseError("array file: unknown device kind '" + kind + "'");
        }
        if (j.at("mode").get<std::string>() == "matching") array.exit_programming_mode();
        return array;
    } catch (const json::exception& e) {
        throw ParseError(std::string("array file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Search outputs
// ---------------------------------------------------------------------------

inline std::string write_search_result(const SearchResult& r)
{
    std::string s = "row,count,v_ml_V,hit\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        s += fmt(static_cast<int>(i)) + "," + fmt(r.rows[i].count) + "," + fmt(r.rows[i].v_ml) + "," +
             (r.rows[i].hit() ? "1" : "0") + "\n";
    return s;
}

struct SearchRow {
    int row = 0;
    int count = 0;
    Volts v_ml = 0.0;
    bool hit = false;
    bool operator==(const SearchRow&) const = default;
};

inline std::vector<SearchRow> read_search_result(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<SearchRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        const std::string where = "result line " + std::to_string(lineno);
        if (f.size() != 4) throw ParseError(where + ": expected 4 fields");
        rows.push_back({static_cast<int>(parse_int(f[0], where)), static_cast<int>(parse_int(f[1], where)),
                        parse_double(f[2], where), parse_int(f[3], where) != 0});
    }
    return rows;
}

inline std::string write_traces(const SearchResult& r)
{
    std::string s = "time_ns,row_index,v_ml\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        for (const auto& p : r.rows[i].trace)
            s += fmt_scaled(p.t, 1e-9) + "," + fmt(static_cast<int>(i)) + "," + fmt(p.v) + "\n";
    return s;
}

inline json energy_to_json(const EnergyReport& e)
{
    return {{"cell_kind", to_string(e.kind)},
            {"per_row", e.per_row},
            {"total_J", e.total},
            {"per_search_per_cell_J", e.per_search_per_cell},
            {"peripheral_overhead_factor", e.peripheral_overhead_factor},
            {"cycle_rate_Hz", e.cycle_rate_hz},
            {"reference_table2_J", e.reference_table2}};
}

inline std::string write_energy(const EnergyReport& e) { return energy_to_json(e).dump(2) + "\n"; }

inline EnergyReport read_energy(const std::string& text)
{
    try {
        const auto j = json::parse(text);
        EnergyReport e;
        e.kind = parse_cell_kind(j.at("cell_kind").get<std::string>());
        e.per_row = j.at("per_row").get<std::vector<double>>();
        e.total = j.at("total_J").get<double>();
        e.per_search_per_cell = j.at("per_search_per_cell_J").get<double>();
        e.peripheral_overhead_factor = j.at("peripheral_overhead_factor").get<double>();
        e.cycle_rate_hz = j.at("cycle_rate_Hz").get<double>();
        e.reference_table2 = j.at("reference_table2_J").get<double>();
        return e;
    } catch (const json::exception& ex) {
        throw ParseError(std::string("energy file: ") + ex.what());
    }
}

// ---------------------------------------------------------------------------
// Verify report
// ---------------------------------------------------------------------------

inline std::string write_verify_summary(const VerifyReport& r)
{
    std::string s;
    s += "iterations: " + fmt(r.max_iterations()) + "\n";
    s += "devices: " + fmt(static_cast<long long>(r.devices.size())) + "\n";
    s += "converged: " + fmt(static_cast<long long>(r.converged_count())) + "\n";
    s += "max_window_error_V: " + fmt(r.max_window_error()) + "\n";
    for (const auto& d : r.devices)
        if (!d.converged)
            s += "failed: " + fmt(d.address.row) + "," + fmt(d.address.col) + "," + to_string(d.address.which) + "\n";
    return s;
}

inline std::string write_verify_devices(const VerifyReport& r)
{
    std::string s = "row,col,which,iterations,window_error_V,converged\n";
    for (const auto& d : r.devices)
        s += fmt(d.address.row) + "," + fmt(d.address.col) + "," + to_string(d.address.which) + "," +
             fmt(d.iterations) + "," + fmt(d.window_error) + "," + (d.converged ? "1" : "0") + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// Front-end inputs
// ---------------------------------------------------------------------------

/// Waveform CSV: time_ns,value_V. A non-numeric first line is a header.
inline Waveform read_waveform(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    Waveform w;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        const std::string where = "waveform line " + std::to_string(lineno);
        if (lineno == 1 && f.size() == 2 && f[0].find_first_of("0123456789") == std::string::npos) continue;
        if (f.size() != 2) throw ParseError(where + ": expected 2 fields");
        w.samples.emplace_back(parse_scaled(f[0], 1e-9, where), parse_double(f[1], where));
    }
    return w;
}

inline std::string write_waveform(const Waveform& w)
{
    std::string s = "time_ns,value_V\n";
    for (const auto& [t, v] : w.samples) s += fmt_scaled(t, 1e-9) + "," + fmt(v) + "\n";
    return s;
}

/// Query CSV: one line of voltages.
inline QueryVector read_query(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line != "\r") break;
    QueryVector q;
    if (line.empty()) throw ParseError("query file is empty");
    const auto f = split_csv_line(line);
    for (std::size_t i = 0; i < f.size(); ++i) q.values.push_back(parse_double(f[i], "query value " + std::to_string(i)));
    return q;
}

inline std::string write_query(const QueryVector& q)
{
    std::string s;
    for (std::size_t i = 0; i < q.values.size(); ++i) s += (i ? "," : "") + fmt(q.values[i]);
    return s + "\n";
}

} // namespace txl::io
