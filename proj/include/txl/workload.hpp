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
#include "txl/frontend.hpp"

#include <random>
#include <utility>
#include <vector>

namespace txl {

/// A set of templates plus one query.
struct Trial {
    std::vector<Template> templates;
    QueryVector query;
};

struct TrialSpec {
    int columns = 32;
    int template_rows = 32;       // templates occupy rows 0..template_rows-1
    Volts range_low = 0.0;        // achievable bound range
    Volts range_high = 3.0;
    Volts margin = 0.05;          // minimum |query - bound|
    double match_probability = -1.0;   // per cell; < 0 draws a fresh value per row
    double exact_row_probability = 0.1; // chance a row matches every column
};

/// Draw one trial where every query value sits at least `margin` away from
/// every stored bound.
inline Trial random_trial(std::mt19937_64& gen, const TrialSpec& spec)
{
    auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); };
    const Volts lo = spec.range_low, hi = spec.range_high, m = spec.margin;
    // keep room for a window strictly on either side of each query value
    const Volts q_lo = lo + 2.5 * m, q_hi = hi - 2.5 * m;

    Trial t;
    for (int c = 0; c < spec.columns; ++c) t.query.values.push_back(uniform(q_lo, q_hi));

    for (int r = 0; r < spec.template_rows; ++r) {
        Template tpl{r, {}, "t" + std::to_string(r)};
        const bool exact = uniform(0.0, 1.0) < spec.exact_row_probability;
        const double p = spec.match_probability >= 0.0 ? spec.match_probability : uniform(0.0, 1.0);
        for (int c = 0; c < spec.columns; ++c) {
            const Volts q = t.query.values[static_cast<std::size_t>(c)];
            MatchWindow w;
            if (exact || uniform(0.0, 1.0) < p) {
                w = {uniform(lo, q - m), uniform(q + m, hi)};
            } else if (uniform(0.0, 1.0) < 0.5) {
                const Volts a = uniform(q + m, hi), b = uniform(q + m, hi);
                w = {std::min(a, b), std::max(a, b)};
            } else {
                const Volts a = uniform(lo, q - m), b = uniform(lo, q - m);
                w = {std::min(a, b), std::max(a, b)};
            }
            tpl.windows.push_back(w);
        }
        t.templates.push_back(std::move(tpl));
    }
    return t;
}

/// Bound range a technology can realize, shrunk by `guard` on both sides.
inline std::pair<Volts, Volts> usable_range(const DeviceParams& tech, Volts vdd, Volts guard = 1e-3)
{
    const auto [lo, hi] = achievable_range(reference_inverter(tech, vdd, tech.g_ref));
    return {lo + guard, hi - guard};
}

/// Program `templates` into a fresh array and leave it in matching mode.
/// Returns the verify report; VerifyFailed propagates with the array still
/// holding the programmed state.
inline VerifyReport program_templates(AcamArray& array, const std::vector<Template>& templates, Volts tol_v,
                                      int max_iters, std::uint64_t seed)
{
    const auto map = compile_templates(templates, array.config(), array.technology());
    array.enter_programming_mode();
    try {
        auto rep = program_and_verify(array, map, tol_v, max_iters, seed);
        array.exit_programming_mode();
        return rep;
    } catch (...) {
        array.exit_programming_mode();
        throw;
    }
}

} // namespace txl
