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

// txl: command-line driver for TXL-ACAM template-matching experiments.

#include "txl/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<std::string> fidelity;
    std::optional<std::string> traces;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--config", f.config, "Key-value config file (dotted keys)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Overrides run.seed");
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--fidelity", f.fidelity, "Cell model")->check(CLI::IsMember({"behavioral", "circuit"}));
    cmd->add_option("--traces", f.traces, "Write matchline traces")->check(CLI::IsMember({"on", "off"}));
}

txl::RunConfig load(const CommonFlags& f)
{
    txl::RunConfig cfg = f.config.empty() ? txl::RunConfig{} : txl::load_run_config(f.config);
    if (f.seed) cfg.seed = *f.seed;
    if (f.fidelity) cfg.fidelity = *f.fidelity == "circuit" ? txl::Fidelity::circuit : txl::Fidelity::behavioral;
    if (f.traces) cfg.traces = *f.traces == "on";
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"TXL-ACAM analogue template-matching simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string template_file, array_file, query_file, waveform_file, sweep_file;

    auto* program = app.add_subcommand("program", "Compile templates and program an array with write-verify");
    add_common(program, flags);
    program->add_option("templates", template_file, "Template CSV (row,col,v_low_V,v_high_V)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* search = app.add_subcommand("search", "Run one search cycle on a programmed array");
    add_common(search, flags);
    search->add_option("array", array_file, "Array state JSON")->required()->check(CLI::ExistingFile);
    auto* q = search->add_option("--query", query_file, "Query CSV (one line of voltages)")->check(CLI::ExistingFile);
    auto* w = search->add_option("--waveform", waveform_file, "Waveform CSV (time_ns,value_V)")->check(CLI::ExistingFile);
    q->excludes(w);

    auto* sweep = app.add_subcommand("sweep", "Grid sweep over v_en, v_th, sigma, sparsity, cell_kind");
    add_common(sweep, flags);
    sweep->add_option("spec", sweep_file, "Sweep spec (TOML arrays)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : txl::cli::kUsageError;
    }

    txl::RunConfig cfg;
    try {
        cfg = load(flags);
    } catch (const txl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return txl::cli::kUsageError;
    }

    if (program->parsed()) return txl::cli::cmd_program(cfg, template_file, flags.out);
    if (search->parsed()) {
        txl::cli::SearchInput in;
        if (!query_file.empty()) in.query_file = query_file;
        if (!waveform_file.empty()) in.waveform_file = waveform_file;
        return txl::cli::cmd_search(cfg, array_file, in, flags.out);
    }
    return txl::cli::cmd_sweep(cfg, sweep_file, flags.out);
}
