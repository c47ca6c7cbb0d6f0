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
#include "txl/matchline.hpp"

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace txl {

struct ArrayConfig {
    int columns = 32;
    int rram_rows = 32;
    int poly_rows = 16;
    Volts vdd_txl = 3.0;
    Volts vdd_prog = 5.0;

    int total_rows() const { return rram_rows + poly_rows; }
    bool operator==(const ArrayConfig&) const = default;
};

/// Device technology shared by every cell of an array.
struct DeviceParams {
    MosfetParams nmos = MosfetParams::nmos();
    MosfetParams pmos = MosfetParams::pmos();
    Siemens g_min = 2e-6;
    Siemens g_max = 200e-6;
    Siemens g_ref = std::sqrt(2e-6 * 200e-6);
    double write_sigma = 0.0;

    bool operator==(const DeviceParams&) const = default;
};

enum class Which { m1, m2 };

inline const char* to_string(Which w) { return w == Which::m1 ? "m1" : "m2"; }

struct DeviceAddress {
    int row = 0;
    int col = 0;
    Which which = Which::m1;

    auto operator<=>(const DeviceAddress&) const = default;
};

struct DecodedLines {
    int row_line = 0;
    int be_line = 0;   // bottom-electrode column select, 2 per cell
    bool operator==(const DecodedLines&) const = default;
};

inline DecodedLines address_decode(const ArrayConfig& cfg, const DeviceAddress& a)
{
    if (a.row < 0 || a.row >= cfg.total_rows() || a.col < 0 || a.col >= cfg.columns)
        throw AddressOutOfRange("device address (" + std::to_string(a.row) + ", " + std::to_string(a.col) +
                                ") outside the array");
    return {a.row, 2 * a.col + (a.which == Which::m1 ? 0 : 1)};
}

// ---------------------------------------------------------------------------
// Serial interfaces
// ---------------------------------------------------------------------------

using Bits = std::vector<bool>;

inline std::string to_bitstring(const Bits& b)
{
    std::string s;
    s.reserve(b.size());
    for (bool x : b) s.push_back(x ? '1' : '0');
    return s;
}

inline Bits from_bitstring(const std::string& s)
{
    Bits b;
    b.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw ParseError("bitstring contains '" + std::string(1, c) + "'");
        b.push_back(c == '1');
    }
    return b;
}

/// Serial-in parallel-out configuration register. Bits enter at the last
/// line and move toward line 0, so after `width` shifts line i holds the
/// i-th bit of the stream.
class SipoRegister {
public:
    explicit SipoRegister(std::size_t width) : lines_(width, false) {}

    void shift(bool bit)
    {
        if (lines_.empty()) return;
        for (std::size_t i = 0; i + 1 < lines_.size(); ++i) lines_[i] = lines_[i + 1];
        lines_.back() = bit;
    }

    std::size_t width() const { return lines_.size(); }
    const Bits& parallel_out() const { return lines_; }

private:
    Bits lines_;
};

inline SipoRegister sipo_load(SipoRegister reg, const Bits& bitstream)
{
    if (bitstream.size() != reg.width())
        throw LengthMismatch("SIPO expects " + std::to_string(reg.width()) + " bits, got " +
                             std::to_string(bitstream.size()));
    for (bool b : bitstream) reg.shift(b);
    return reg;
}

/// Parallel-in serial-out readout register with separate load and shift
/// controls. Shifts out line 0 (row 0) first.
class PisoRegister {
public:
    explicit PisoRegister(std::size_t width) : lines_(width, false) {}

    void load(const Bits& word)
    {
        if (word.size() != lines_.size())
            throw LengthMismatch("PISO expects " + std::to_string(lines_.size()) + " bits, got " +
                                 std::to_string(word.size()));
        lines_ = word;
    }

    bool shift()
    {
        if (lines_.empty()) return false;
        const bool out = lines_.front();
        for (std::size_t i = 0; i + 1 < lines_.size(); ++i) lines_[i] = lines_[i + 1];
        lines_.back() = false;
        return out;
    }

    std::size_t width() const { return lines_.size(); }

private:
    Bits lines_;
};

inline Bits piso_load_and_shift(PisoRegister reg, const Bits& word)
{
    reg.load(word);
    Bits out;
    out.reserve(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) out.push_back(reg.shift());
    return out;
}

// ---------------------------------------------------------------------------
// Array
// ---------------------------------------------------------------------------

/// The TXL-ACAM array: RRAM rows followed by polysilicon emulator rows.
///
/// In matching mode the array is an immutable snapshot whose windows are
/// cached. In programming mode every cell exposes its two top elements as
/// 1T1R paths and search is rejected.
class AcamArray {
public:
    AcamArray(ArrayConfig cfg, DeviceParams tech) : cfg_(cfg), tech_(tech)
    {
        if (cfg_.columns < 1 || cfg_.rram_rows < 0 || cfg_.poly_rows < 0 || cfg_.total_rows() < 1)
            throw OutOfRange("array needs at least one row and one column");
        cells_.reserve(static_cast<std::size_t>(cfg_.total_rows() * cfg_.columns));
        for (int r = 0; r < cfg_.total_rows(); ++r) {
            for (int c = 0; c < cfg_.columns; ++c) {
                TxlCell cell = make_txl_cell(tech_.g_ref, tech_.g_ref, tech_.g_ref, tech_.g_min, tech_.g_max,
                                             tech_.write_sigma, tech_.pmos, tech_.nmos, cfg_.vdd_txl);
                if (r >= cfg_.rram_rows) {
                    cell.inv_low.top_element = ResistiveElement::polysilicon(tech_.g_ref);
                    cell.inv_high.top_element = ResistiveElement::polysilicon(tech_.g_ref);
                }
                cells_.push_back(std::move(cell));
            }
        }
        refresh_windows();
    }

    const ArrayConfig& config() const { return cfg_; }
    const DeviceParams& technology() const { return tech_; }
    int rows() const { return cfg_.total_rows(); }
    int columns() const { return cfg_.columns; }
    CellMode mode() const { return mode_; }
    bool is_rram_row(int row) const { return row < cfg_.rram_rows; }

    const TxlCell& cell(int row, int col) const { return cells_.at(index(row, col)); }

    const ResistiveElement& element(const DeviceAddress& a) const
    {
        address_decode(cfg_, a);
        const auto& c = cells_[index(a.row, a.col)];
        return a.which == Which::m1 ? c.inv_low.top_element : c.inv_high.top_element;
    }

    /// Cached windows, row-major. Only valid in matching mode.
    const MatchWindow& window(int row, int col) const
    {
        if (mode_ != CellMode::matching) throw ModeError("windows are only defined in matching mode");
        return windows_.at(index(row, col));
    }

    void enter_programming_mode()
    {
        for (auto& c : cells_) c.mode = CellMode::programming;
        mode_ = CellMode::programming;
    }

    void exit_programming_mode()
    {
        for (auto& c : cells_) c.mode = CellMode::matching;
        mode_ = CellMode::matching;
        refresh_windows();
    }

    /// Single-device write through the 1T1R programming path.
    void program_device(const DeviceAddress& a, Siemens target_g, std::uint64_t seed)
    {
        address_decode(cfg_, a);
        if (mode_ != CellMode::programming) throw ModeError("program_device requires programming mode");
        if (!is_rram_row(a.row))
            throw ImmutableDevice("row " + std::to_string(a.row) + " is a polysilicon emulator row");
        auto& elem = mutable_element(a);
        elem = rram_write(elem, target_g, seed);
    }

    /// Replace a device wholesale (used when restoring a saved array state).
    void restore_device(const DeviceAddress& a, const ResistiveElement& e)
    {
        address_decode(cfg_, a);
        mutable_element(a) = e;
        if (mode_ == CellMode::matching) windows_[index(a.row, a.col)] = compute_window(cells_[index(a.row, a.col)]);
    }

    /// Switching point of a bound inverter with top conductance `g_top`,
    /// memoized across the array's lifetime.
    Volts bound_threshold(Siemens g_top)
    {
        const auto& c = cells_.front();
        HybridInverter inv = c.inv_low;
        inv.top_element = ResistiveElement::rram(g_top, tech_.g_min, tech_.g_max, tech_.write_sigma);
        inv.bottom_element = ResistiveElement::polysilicon(tech_.g_ref);
        return memo_threshold(inv);
    }

    std::vector<Siemens> conductances() const
    {
        std::vector<Siemens> out;
        out.reserve(cells_.size() * 2);
        for (const auto& c : cells_) {
            out.push_back(c.inv_low.top_element.conductance());
            out.push_back(c.inv_high.top_element.conductance());
        }
        return out;
    }

private:
    std::size_t index(int row, int col) const
    {
        if (row < 0 || row >= rows() || col < 0 || col >= columns())
            throw AddressOutOfRange("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") outside the array");
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(cfg_.columns) + static_cast<std::size_t>(col);
    }

    ResistiveElement& mutable_element(const DeviceAddress& a)
    {
        auto& c = cells_[index(a.row, a.col)];
        return a.which == Which::m1 ? c.inv_low.top_element : c.inv_high.top_element;
    }

    MatchWindow compute_window(const TxlCell& c)
    {
        return {memo_threshold(c.inv_low), memo_threshold(c.inv_high)};
    }

    // All cells share one technology, so the switching point depends only on
    // the element pair.
    Volts memo_threshold(const HybridInverter& inv)
    {
        const auto key = std::make_pair(inv.top_element.conductance(), inv.bottom_element.conductance());
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const Volts v = inverter_threshold(inv, false);
        memo_.emplace(key, v);
        return v;
    }

    void refresh_windows()
    {
        windows_.resize(cells_.size());
        for (std::size_t i = 0; i < cells_.size(); ++i) windows_[i] = compute_window(cells_[i]);
    }

    ArrayConfig cfg_;
    DeviceParams tech_;
    CellMode mode_ = CellMode::matching;
    std::vector<TxlCell> cells_;
    std::vector<MatchWindow> windows_;
    std::map<std::pair<Siemens, Siemens>, Volts> memo_;
};

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct QueryVector {
    std::vector<Volts> values;
    bool operator==(const QueryVector&) const = default;
};

struct SearchSettings {
    Volts v_en = enable_voltage_for(MosfetParams::pmos(), 3.0, 5e-6);
    TimingConfig timing;
    MatchlineParams matchline;
    SenseAmp sense;
    Fidelity fidelity = Fidelity::behavioral;
    CellModel model;
    bool record_traces = false;
};

struct RowResult {
    int count = 0;
    Volts v_ml = 0.0;
    SenseResult sensed = SenseResult::miss;
    std::vector<TracePoint> trace;

    bool hit() const { return sensed == SenseResult::hit; }
};

struct SearchResult {
    int columns = 0;
    QueryVector query;
    Volts vdd = 3.0;
    std::vector<RowResult> rows;
    std::vector<Outcome> outcomes;   // row-major, per cell

    Outcome outcome(int row, int col) const
    {
        return outcomes.at(static_cast<std::size_t>(row) * static_cast<std::size_t>(columns) +
                           static_cast<std::size_t>(col));
    }

    /// Sense-amp hit bits, row 0 first.
    Bits hit_word() const
    {
        Bits b;
        b.reserve(rows.size());
        for (const auto& r : rows) b.push_back(r.hit());
        return b;
    }
};

inline void validate_query(const QueryVector& q, int columns, Volts vdd)
{
    if (static_cast<int>(q.values.size()) != columns)
        throw LengthMismatch("query has " + std::to_string(q.values.size()) + " values, expected " +
                             std::to_string(columns));
    for (std::size_t i = 0; i < q.values.size(); ++i)
        if (!(q.values[i] >= 0.0 && q.values[i] <= vdd))
            throw OutOfRange("query value " + std::to_string(i) + " outside [0, vdd]");
}

/// Broadcast the query down the columns, evaluate every cell, integrate each
/// matchline over t_evaluate from a reset state, and sense.
inline SearchResult array_search(const AcamArray& array, const QueryVector& query, const SearchSettings& s)
{
    if (array.mode() != CellMode::matching) throw ModeError("array_search requires matching mode");
    const Volts vdd = array.config().vdd_txl;
    validate_query(query, array.columns(), vdd);
    validate(s.timing);

    SearchResult res;
    res.columns = array.columns();
    res.query = query;
    res.vdd = vdd;
    res.rows.resize(static_cast<std::size_t>(array.rows()));
    res.outcomes.reserve(static_cast<std::size_t>(array.rows() * array.columns()));

    MatchlineParams mlp = s.matchline;
    mlp.vdd = vdd;
    std::vector<CellOutput> outputs(static_cast<std::size_t>(array.columns()));
    for (int r = 0; r < array.rows(); ++r) {
        int count = 0;
        for (int c = 0; c < array.columns(); ++c) {
            const auto& cell = array.cell(r, c);
            const Volts v_in = query.values[static_cast<std::size_t>(c)];
            auto& out = outputs[static_cast<std::size_t>(c)];
            if (s.fidelity == Fidelity::behavioral)
                out = detail::behavioral_output(array.window(r, c), v_in, enable_current_limit(cell, s.v_en), vdd,
                                                s.model.taper);
            else
                out = cell_evaluate(cell, v_in, s.v_en, Fidelity::circuit, s.model);
            count += out.matching ? 1 : 0;
            res.outcomes.push_back(out.matching ? Outcome::match : Outcome::mismatch);
        }
        auto ml = matchline_evaluate(MatchlineState{mlp}, outputs, s.timing, s.record_traces);
        auto& row = res.rows[static_cast<std::size_t>(r)];
        row.count = count;
        row.v_ml = ml.v;
        row.sensed = sense(ml.v, s.sense);
        row.trace = std::move(ml.trace);
    }
    return res;
}

} // namespace txl
