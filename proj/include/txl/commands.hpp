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

#include "txl/config.hpp"
#include "txl/energy.hpp"
#include "txl/frontend.hpp"
#include "txl/io.hpp"
#include "txl/workload.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace txl::cli {

namespace fs = std::filesystem;

/// Process exit codes.
enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

inline void echo_config(const RunConfig& cfg, const fs::path& out)
{
    io::write_file_atomic(out / "config.toml", to_config_text(cfg));
}

/// Compile a template file, program it into a fresh array with
/// program-and-verify, and write the array state plus the verify report.
inline int cmd_program(const RunConfig& cfg, const fs::path& template_file, const fs::path& out,
                       std::ostream& err = std::cerr)
{
    std::vector<Template> templates;
    try {
        templates = io::read_templates(io::read_file(template_file), cfg.array.columns, cfg.array.vdd_txl);
        for (const auto& t : templates)
            if (t.row >= cfg.array.rram_rows)
                throw ParseError("template row " + std::to_string(t.row) + " is not an RRAM row (0.." +
                                 std::to_string(cfg.array.rram_rows - 1) + ")");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    AcamArray array(cfg.array, cfg.device_params());
    ConductanceMap map;
    try {
        map = compile_templates(templates, cfg.array, array.technology());
    } catch (const Unachievable& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }

    int code = kOk;
    VerifyReport report;
    array.enter_programming_mode();
    try {
        report = program_and_verify(array, map, cfg.tol_v, cfg.max_iters, cfg.seed);
    } catch (const VerifyFailed& e) {
        err << "error: verify failed, " << e.what() << "\n";
        report = e.report;
        code = kDomainError;
    }
    array.exit_programming_mode();

    echo_config(cfg, out);
    io::write_file_atomic(out / "conductance_map.csv", io::write_conductance_map(map));
    io::write_file_atomic(out / "array.json", io::write_array(array));
    io::write_file_atomic(out / "verify_report.txt", io::write_verify_summary(report));
    io::write_file_atomic(out / "verify_devices.csv", io::write_verify_devices(report));
    return code;
}

struct SearchInput {
    std::optional<fs::path> query_file;
    std::optional<fs::path> waveform_file;
};

/// Replay one initialise/evaluate cycle for a query (or a sampled waveform)
/// and write the per-row result, PISO bitstream, energy report and optional
/// traces.
inline int cmd_search(const RunConfig& cfg, const fs::path& array_file, const SearchInput& input, const fs::path& out,
                      std::ostream& err = std::cerr)
{
    try {
        AcamArray array = io::read_array(io::read_file(array_file), cfg.device_params());
        if (array.config() != cfg.array) {
            err << "error: array file dimensions (" << array.rows() << " rows x " << array.columns()
                << " columns) differ from config (" << cfg.array.total_rows() << " x " << cfg.array.columns << ")\n";
            return kUsageError;
        }
        QueryVector q;
        if (input.query_file) {
            q = io::read_query(io::read_file(*input.query_file));
        } else if (input.waveform_file) {
            const auto w = io::read_waveform(io::read_file(*input.waveform_file));
            validate(w, cfg.array.vdd_txl);
            q = sample_and_hold(w, cfg.frontend_start, cfg.frontend_period, array.columns());
        } else {
            err << "error: search needs a query or a waveform file\n";
            return kUsageError;
        }
        if (static_cast<int>(q.values.size()) != array.columns()) {
            err << "error: query has " << q.values.size() << " values, expected " << array.columns() << "\n";
            return kUsageError;
        }

        const auto settings = cfg.search_settings();
        const auto result = array_search(array, q, settings);
        const auto energy = search_energy(result, cfg.energy, cfg.overhead, CellKind::txl9t4r, cfg.timing.t_clock);
        const auto piso = piso_load_and_shift(PisoRegister(result.rows.size()), result.hit_word());

        echo_config(cfg, out);
        io::write_file_atomic(out / "result.csv", io::write_search_result(result));
        io::write_file_atomic(out / "piso.txt", to_bitstring(piso) + "\n");
        io::write_file_atomic(out / "energy.json", io::write_energy(energy));
        if (settings.record_traces) io::write_file_atomic(out / "traces.csv", io::write_traces(result));
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

/// Parameter grids for cmd_sweep.
struct SweepSpec {
    std::vector<Volts> v_en;
    std::vector<Volts> v_th;
    std::vector<double> sigma;
    std::vector<double> sparsity;
    std::vector<CellKind> cell_kind;
    bool empty = false;   // some grid listed no values, or no grid given
};

/// Keys: v_en, v_th, sigma, sparsity, cell_kind (TOML arrays). Grids that
/// are not listed take the config value. Values are checked against the
/// config before anything runs.
inline SweepSpec parse_sweep_spec(const std::string& text, const RunConfig& cfg)
{
    std::istringstream in(text);
    SweepSpec s;
    const Volts vdd = cfg.array.vdd_txl;
    int listed = 0;
    for (const auto& item : detail::read_items(in)) {
        const std::string name = item.fullname();
        ++listed;
        if (item.inputs.empty()) s.empty = true;
        for (const auto& v : item.inputs) {
            const std::string where = "sweep " + name;
            if (name == "v_en") {
                const double x = io::parse_double(v, where);
                if (!(x >= 0.0 && x <= vdd)) throw ParseError(where + ": " + v + " outside [0, vdd]");
                s.v_en.push_back(x);
            } else if (name == "v_th") {
                const double x = io::parse_double(v, where);
                if (!(x > 0.0 && x < vdd)) throw ParseError(where + ": " + v + " outside (0, vdd)");
                s.v_th.push_back(x);
            } else if (name == "sigma") {
                const double x = io::parse_double(v, where);
                if (!(x >= 0.0)) throw ParseError(where + ": " + v + " must be non-negative");
                s.sigma.push_back(x);
            } else if (name == "sparsity") {
                const double x = io::parse_double(v, where);
                if (!(x >= 0.0 && x <= 1.0)) throw ParseError(where + ": " + v + " outside [0, 1]");
                s.sparsity.push_back(x);
            } else if (name == "cell_kind") {
                s.cell_kind.push_back(parse_cell_kind(v));
            } else {
                throw ParseError("unknown sweep key '" + name + "'");
            }
        }
    }
    if (listed == 0) s.empty = true;
    if (s.v_en.empty()) s.v_en.push_back(cfg.resolved_v_en());
    if (s.v_th.empty()) s.v_th.push_back(cfg.sense.v_th);
    if (s.sigma.empty()) s.sigma.push_back(cfg.tech.write_sigma);
    if (s.sparsity.empty()) s.sparsity.push_back(0.5);
    if (s.cell_kind.empty()) s.cell_kind.push_back(CellKind::txl9t4r);
    return s;
}

inline const char* kSweepHeader =
    "v_en_V,v_th_V,sigma,sparsity,cell_kind,k_boundary,accuracy,energy_total_J,energy_per_cell_J\n";

namespace detail {

struct SweepWorkload {
    std::vector<AcamArray> arrays;
    std::vector<Trial> trials;
};

} // namespace detail

/// Grid sweep over (v_en, v_th, sigma, sparsity, cell_kind). Each grid point
/// runs `sweep.trials` seeded trials on the RRAM rows and reports the
/// k boundary of v_th, the threshold-policy accuracy against window
/// arithmetic, and the cell energy of the workload.
inline int cmd_sweep(const RunConfig& cfg, const fs::path& spec_file, const fs::path& out,
                     std::ostream& err = std::cerr)
{
    SweepSpec spec;
    try {
        spec = parse_sweep_spec(io::read_file(spec_file), cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    std::string csv = kSweepHeader;
    if (spec.empty) {
        echo_config(cfg, out);
        io::write_file_atomic(out / "sweep.csv", csv);
        return kOk;
    }

    const Volts vdd = cfg.array.vdd_txl;
    // programmed arrays depend only on (sigma, sparsity)
    std::map<std::pair<double, double>, detail::SweepWorkload> workloads;
    auto workload_for = [&](double sigma, double sparsity) -> detail::SweepWorkload& {
        auto key = std::make_pair(sigma, sparsity);
        auto it = workloads.find(key);
        if (it != workloads.end()) return it->second;
        DeviceParams tech = cfg.device_params();
        tech.write_sigma = sigma;
        const auto [lo, hi] = usable_range(tech, vdd);
        std::mt19937_64 gen(numerics::mix_seed(cfg.seed, std::hash<double>{}(sigma), std::hash<double>{}(sparsity)));
        detail::SweepWorkload w;
        for (int t = 0; t < cfg.sweep_trials; ++t) {
            TrialSpec ts{cfg.array.columns, cfg.array.rram_rows, lo, hi, 0.05, sparsity, 0.0};
            w.trials.push_back(random_trial(gen, ts));
            AcamArray a(cfg.array, tech);
            try {
                program_templates(a, w.trials.back().templates, cfg.tol_v, cfg.max_iters,
                                  numerics::mix_seed(cfg.seed, static_cast<std::uint64_t>(t)));
            } catch (const VerifyFailed&) {
                // keep the partially converged array; accuracy reflects it
            }
            w.arrays.push_back(std::move(a));
        }
        return workloads.emplace(key, std::move(w)).first->second;
    };

    try {
        for (Volts v_en : spec.v_en)
            for (Volts v_th : spec.v_th)
                for (double sigma : spec.sigma)
                    for (double sparsity : spec.sparsity) {
                        auto& w = workload_for(sigma, sparsity);
                        SearchSettings s = cfg.search_settings();
                        s.v_en = v_en;
                        s.sense.v_th = v_th;
                        s.record_traces = false;
                        const CountLaw law = count_law_for(w.arrays.front(), s);
                        const int k = law.k_boundary(v_th);

                        std::vector<SearchResult> results;
                        std::size_t agree = 0, total = 0;
                        for (std::size_t t = 0; t < w.trials.size(); ++t) {
                            results.push_back(array_search(w.arrays[t], w.trials[t].query, s));
                            const auto& res = results.back();
                            for (int r = 0; r < cfg.array.total_rows(); ++r) {
                                int n = 0;
                                if (r < static_cast<int>(w.trials[t].templates.size()))
                                    for (int c = 0; c < cfg.array.columns; ++c)
                                        n += w.trials[t].templates[static_cast<std::size_t>(r)]
                                                 .windows[static_cast<std::size_t>(c)]
                                                 .contains(w.trials[t].query.values[static_cast<std::size_t>(c)]);
                                agree += res.rows[static_cast<std::size_t>(r)].hit() == (n >= k) ? 1 : 0;
                                ++total;
                            }
                        }
                        for (CellKind kind : spec.cell_kind) {
                            Joules e_total = 0.0;
                            std::size_t cells = 0;
                            for (const auto& res : results) {
                                e_total += search_energy(res, cfg.energy, cfg.overhead, kind, cfg.timing.t_clock).total;
                                cells += res.rows.size() * static_cast<std::size_t>(res.columns);
                            }
                            csv += io::fmt(v_en) + "," + io::fmt(v_th) + "," + io::fmt(sigma) + "," + io::fmt(sparsity) +
                                   "," + to_string(kind) + "," + io::fmt(k) + "," +
                                   io::fmt(static_cast<double>(agree) / static_cast<double>(total)) + "," +
                                   io::fmt(e_total) + "," + io::fmt(e_total / static_cast<double>(cells)) + "\n";
                        }
                    }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }

    echo_config(cfg, out);
    io::write_file_atomic(out / "sweep.csv", csv);
    return kOk;
}

} // namespace txl::cli
