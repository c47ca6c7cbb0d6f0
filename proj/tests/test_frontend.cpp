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

#include "txl/workload.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace txl;

namespace {

const DeviceParams kTech;

Waveform ramp(double period, int n)
{
    return Waveform{{{0.0, 0.0}, {period * (n - 1), 3.0}}};
}

struct Rig {
    AcamArray array{ArrayConfig{}, kTech};
    SearchSettings settings;
    CountLaw law = count_law_for(array, settings);
};

// direct per-row counts from the templates
std::vector<int> counts_of(const Trial& t)
{
    std::vector<int> n;
    for (const auto& tpl : t.templates) {
        int k = 0;
        for (std::size_t c = 0; c < tpl.windows.size(); ++c) k += tpl.windows[c].contains(t.query.values[c]);
        n.push_back(k);
    }
    return n;
}

} // namespace

TEST(SampleAndHold, ConstantWaveform)
{
    const Waveform w{{{0.0, 1.0}, {100e-9, 1.0}}};
    const auto q = sample_and_hold(w, 0.0, 1e-9, 32);
    ASSERT_EQ(q.values.size(), 32u);
    for (double v : q.values) EXPECT_EQ(v, 1.0);
}

TEST(SampleAndHold, AlignedRamp)
{
    const auto q = sample_and_hold(ramp(2e-9, 32), 0.0, 2e-9, 32);
    for (int i = 0; i < 32; ++i) EXPECT_NEAR(q.values[static_cast<std::size_t>(i)], 3.0 * i / 31.0, 1e-12);
}

TEST(SampleAndHold, OutsideSupport)
{
    EXPECT_THROW(sample_and_hold(ramp(1e-9, 32), 0.0, 1e-9, 33), OutOfSupport);
    EXPECT_THROW(sample_and_hold(ramp(1e-9, 32), -1e-9, 1e-9, 4), OutOfSupport);
    EXPECT_THROW(waveform_at(Waveform{}, 0.0), OutOfSupport);
}

TEST(Waveform, Validation)
{
    EXPECT_THROW(validate(Waveform{{{1.0, 0.0}, {0.5, 0.0}}}, 3.0), OutOfRange);
    EXPECT_THROW(validate(Waveform{{{0.0, 3.5}}}, 3.0), OutOfRange);
    EXPECT_NO_THROW(validate(ramp(1e-9, 32), 3.0));
}

TEST(Classify, SingleRowConstruction)
{
    Rig rig;
    const auto [lo, hi] = usable_range(kTech, 3.0);
    Template t{6, std::vector<MatchWindow>(32, MatchWindow{lo + 0.05, hi - 0.05}), "only"};
    program_templates(rig.array, {t}, 0.02, 10, 1);
    QueryVector q{std::vector<double>(32, 0.5 * (lo + hi))};
    const auto res = array_search(rig.array, q, rig.settings);
    EXPECT_EQ(classify(res, MatchPolicy::best(), rig.law), (Classification{{6}}));
    EXPECT_EQ(classify(res, MatchPolicy::exact(), rig.law), (Classification{{6}}));
    EXPECT_EQ(oracle_classify({t}, q, MatchPolicy::best()), (Classification{{6}}));
    EXPECT_EQ(oracle_classify({t}, q, MatchPolicy::exact()), (Classification{{6}}));
}

TEST(Classify, BestMatchTieGoesToLowerRow)
{
    SearchResult r;
    r.columns = 4;
    r.rows.resize(5);
    r.rows[1].v_ml = 0.4;
    r.rows[3].v_ml = 0.4;
    r.rows[4].v_ml = 0.2;
    const CountLaw law(4, 5e-6, 0.3, MatchlineParams{}, TimingConfig{});
    EXPECT_EQ(classify(r, MatchPolicy::best(), law), (Classification{{1}}));
    r.rows[1].v_ml = r.rows[3].v_ml = r.rows[4].v_ml = 0.0;
    EXPECT_TRUE(classify(r, MatchPolicy::best(), law).none());
}

TEST(Classify, PolicyValidation)
{
    const CountLaw law(4, 5e-6, 0.3, MatchlineParams{}, TimingConfig{});
    SearchResult r;
    r.columns = 4;
    EXPECT_THROW(classify(r, MatchPolicy::threshold(0), law), OutOfRange);
    EXPECT_THROW(classify(r, MatchPolicy::threshold(5), law), OutOfRange);
}

TEST(OracleClassify, EmptyInputsGiveNone)
{
    QueryVector q{std::vector<double>(32, 1.2)};
    EXPECT_TRUE(oracle_classify({}, q, MatchPolicy::best()).none());
    EXPECT_TRUE(oracle_classify({}, q, MatchPolicy::exact()).none());
    Template empty{0, std::vector<MatchWindow>(32, MatchWindow{1.5, 1.5}), ""};
    EXPECT_TRUE(oracle_classify({empty}, q, MatchPolicy::best()).none());
    EXPECT_TRUE(oracle_classify({empty}, q, MatchPolicy::threshold(1)).none());
}

TEST(Classify, AgreesWithOracleOnRandomTrials)
{
    const auto [lo, hi] = usable_range(kTech, 3.0);
    std::mt19937_64 gen(14);
    TrialSpec spec;
    spec.range_low = lo;
    spec.range_high = hi;
    spec.template_rows = 8;
    int threshold_hits = 0;
    for (int i = 0; i < 100; ++i) {
        Rig rig;
        const auto trial = random_trial(gen, spec);
        program_templates(rig.array, trial.templates, 0.02, 10, static_cast<std::uint64_t>(i));
        const auto res = array_search(rig.array, trial.query, rig.settings);
        const auto n = counts_of(trial);
        for (std::size_t r = 0; r < n.size(); ++r) ASSERT_EQ(res.rows[r].count, n[r]);

        const auto t14 = classify(res, MatchPolicy::threshold(14), rig.law);
        Classification expect;
        for (std::size_t r = 0; r < n.size(); ++r)
            if (n[r] >= 14) expect.rows.push_back(static_cast<int>(r));
        ASSERT_EQ(t14, expect) << "trial " << i;
        threshold_hits += static_cast<int>(t14.rows.size());

        for (auto p : {MatchPolicy::exact(), MatchPolicy::best(), MatchPolicy::threshold(1 + i % 32)})
            ASSERT_EQ(classify(res, p, rig.law), oracle_classify(trial.templates, trial.query, p)) << "trial " << i;
        ASSERT_EQ(classify(res, MatchPolicy::exact(), rig.law), classify(res, MatchPolicy::threshold(32), rig.law));
    }
    EXPECT_GT(threshold_hits, 0);
}

TEST(Classify, BestMatchInvariantUnderCurrentScaling)
{
    const auto [lo, hi] = usable_range(kTech, 3.0);
    std::mt19937_64 gen(15);
    TrialSpec spec;
    spec.range_low = lo;
    spec.range_high = hi;
    spec.template_rows = 12;
    spec.exact_row_probability = 0.0;
    for (int i = 0; i < 20; ++i) {
        AcamArray array(ArrayConfig{}, kTech);
        const auto trial = random_trial(gen, spec);
        program_templates(array, trial.templates, 0.02, 10, 1);
        SearchSettings a, b;
        a.v_en = enable_voltage_for(kTech.pmos, 3.0, 2e-6);
        b.v_en = enable_voltage_for(kTech.pmos, 3.0, 4e-6);
        const auto ra = array_search(array, trial.query, a);
        const auto rb = array_search(array, trial.query, b);
        for (const auto& row : rb.rows) ASSERT_LT(row.v_ml, 3.0 - 0.3);
        EXPECT_EQ(classify(ra, MatchPolicy::best(), count_law_for(array, a)),
                  classify(rb, MatchPolicy::best(), count_law_for(array, b)));
    }
}
