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

#include "txl/array.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace txl;

namespace {

const DeviceParams kTech;

Siemens log_uniform(std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return kTech.g_min * std::pow(kTech.g_max / kTech.g_min, u(gen));
}

void program_cell(AcamArray& a, int r, int c, Siemens g1, Siemens g2)
{
    a.program_device({r, c, Which::m1}, g1, 0);
    a.program_device({r, c, Which::m2}, g2, 0);
}

// brute force: direct window test per cell, bypassing the array's cache
int direct_count(const AcamArray& a, int r, const QueryVector& q)
{
    int n = 0;
    for (int c = 0; c < a.columns(); ++c) n += cell_window(a.cell(r, c)).contains(q.values[static_cast<std::size_t>(c)]);
    return n;
}

} // namespace

TEST(AddressDecode, Corners)
{
    const ArrayConfig cfg;
    EXPECT_EQ(address_decode(cfg, {0, 0, Which::m1}), (DecodedLines{0, 0}));
    EXPECT_EQ(address_decode(cfg, {0, 31, Which::m2}), (DecodedLines{0, 63}));
    EXPECT_EQ(address_decode(cfg, {47, 31, Which::m2}), (DecodedLines{47, 63}));
    EXPECT_THROW(address_decode(cfg, {48, 0, Which::m1}), AddressOutOfRange);
    EXPECT_THROW(address_decode(cfg, {0, 32, Which::m1}), AddressOutOfRange);
    EXPECT_THROW(address_decode(cfg, {-1, 0, Which::m1}), AddressOutOfRange);
}

TEST(AddressDecode, InjectiveOverRramSubArray)
{
    const ArrayConfig cfg;
    std::set<std::pair<int, int>> seen;
    for (int r = 0; r < cfg.rram_rows; ++r)
        for (int c = 0; c < cfg.columns; ++c)
            for (auto w : {Which::m1, Which::m2}) {
                const auto d = address_decode(cfg, {r, c, w});
                EXPECT_LT(d.be_line, 64);
                seen.insert({d.row_line, d.be_line});
            }
    EXPECT_EQ(seen.size(), 2048u);
}

TEST(Programming, RequiresProgrammingMode)
{
    AcamArray a(ArrayConfig{}, kTech);
    EXPECT_THROW(a.program_device({0, 0, Which::m1}, 50e-6, 1), ModeError);
    a.enter_programming_mode();
    EXPECT_THROW(a.window(0, 0), ModeError);
    EXPECT_THROW(array_search(a, QueryVector{std::vector<double>(32, 1.0)}, {}), ModeError);
}

TEST(Programming, SingleDeviceIsolation)
{
    AcamArray a(ArrayConfig{}, kTech);
    const auto before = a.conductances();
    a.enter_programming_mode();
    a.program_device({5, 7, Which::m1}, 80e-6, 3);
    EXPECT_EQ(rram_read(a.element({5, 7, Which::m1})), 80e-6);
    const auto after = a.conductances();
    int changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i) changed += before[i] != after[i];
    EXPECT_EQ(changed, 1);
    EXPECT_NE(before[(5 * 32 + 7) * 2], after[(5 * 32 + 7) * 2]);
}

TEST(Programming, PolysiliconRowsRejectWrites)
{
    AcamArray a(ArrayConfig{}, kTech);
    a.enter_programming_mode();
    EXPECT_THROW(a.program_device({40, 0, Which::m1}, 50e-6, 1), ImmutableDevice);
    EXPECT_THROW(a.program_device({48, 0, Which::m1}, 50e-6, 1), AddressOutOfRange);
}

TEST(Programming, ExhaustiveDistinctTargetsReadBackExactly)
{
    AcamArray a(ArrayConfig{}, kTech);
    a.enter_programming_mode();
    std::vector<Siemens> targets;
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            for (auto w : {Which::m1, Which::m2}) {
                const double g = kTech.g_min + (kTech.g_max - kTech.g_min) * static_cast<double>(targets.size()) / 2047.0;
                targets.push_back(g);
                a.program_device({r, c, w}, g, static_cast<std::uint64_t>(targets.size()));
            }
    std::size_t i = 0;
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            for (auto w : {Which::m1, Which::m2}) EXPECT_EQ(rram_read(a.element({r, c, w})), targets[i++]);
    EXPECT_EQ(std::set<double>(targets.begin(), targets.end()).size(), 2048u);
}

TEST(Programming, ModeRoundTripPreservesState)
{
    AcamArray a(ArrayConfig{}, kTech);
    a.enter_programming_mode();
    program_cell(a, 3, 4, 5e-6, 90e-6);
    a.exit_programming_mode();
    const auto g = a.conductances();
    const auto w = a.window(3, 4);
    a.enter_programming_mode();
    a.exit_programming_mode();
    EXPECT_EQ(a.conductances(), g);
    EXPECT_EQ(a.window(3, 4), w);
    EXPECT_EQ(w, cell_window(a.cell(3, 4)));
}

TEST(Search, FreshArrayMatchesNothing)
{
    const AcamArray a(ArrayConfig{}, kTech);
    for (double v : {0.0, 1.0, 1.44, 2.0, 3.0}) {
        const auto res = array_search(a, QueryVector{std::vector<double>(32, v)}, {});
        ASSERT_EQ(res.rows.size(), 48u);
        for (const auto& r : res.rows) {
            EXPECT_EQ(r.count, 0);
            EXPECT_EQ(r.v_ml, 0.0);
            EXPECT_FALSE(r.hit());
        }
    }
}

TEST(Search, SingleRowConstruction)
{
    AcamArray a(ArrayConfig{}, kTech);
    a.enter_programming_mode();
    std::mt19937_64 gen(4);
    for (int c = 0; c < 32; ++c) {
        double g1 = log_uniform(gen), g2 = log_uniform(gen);
        if (g1 > g2) std::swap(g1, g2);
        program_cell(a, 9, c, g1, g2 * 1.5 > kTech.g_max ? kTech.g_max : g2 * 1.5);
    }
    a.exit_programming_mode();
    QueryVector q;
    for (int c = 0; c < 32; ++c) q.values.push_back(a.window(9, c).midpoint());
    const auto res = array_search(a, q, {});
    for (int r = 0; r < 48; ++r) {
        EXPECT_EQ(res.rows[static_cast<std::size_t>(r)].count, r == 9 ? 32 : 0);
        EXPECT_EQ(res.rows[static_cast<std::size_t>(r)].hit(), r == 9);
    }
    const auto word = res.hit_word();
    EXPECT_EQ(std::count(word.begin(), word.end(), true), 1);
}

TEST(Search, CountsMatchDirectWindowTest)
{
    const ArrayConfig cfg{32, 8, 2};
    std::mt19937_64 gen(100);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        AcamArray a(cfg, kTech);
        a.enter_programming_mode();
        for (int r = 0; r < cfg.rram_rows; ++r)
            for (int c = 0; c < cfg.columns; ++c) program_cell(a, r, c, log_uniform(gen), log_uniform(gen));
        a.exit_programming_mode();
        QueryVector q;
        for (int c = 0; c < cfg.columns; ++c) q.values.push_back(u(gen));
        const auto res = array_search(a, q, {});
        for (int r = 0; r < a.rows(); ++r) {
            ASSERT_EQ(res.rows[static_cast<std::size_t>(r)].count, direct_count(a, r, q)) << "trial " << trial;
            for (int c = 0; c < cfg.columns; ++c)
                EXPECT_EQ(res.outcome(r, c) == Outcome::match,
                          a.window(r, c).contains(q.values[static_cast<std::size_t>(c)]));
        }
    }
}

TEST(Search, RowPermutationPermutesResults)
{
    const ArrayConfig cfg{16, 4, 0};
    std::mt19937_64 gen(8);
    std::vector<std::vector<std::pair<double, double>>> rows(4);
    for (auto& row : rows)
        for (int c = 0; c < 16; ++c) row.push_back({log_uniform(gen), log_uniform(gen)});
    const std::vector<int> perm{2, 0, 3, 1};
    AcamArray a(cfg, kTech), b(cfg, kTech);
    a.enter_programming_mode();
    b.enter_programming_mode();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 16; ++c) {
            const auto [g1, g2] = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            program_cell(a, r, c, g1, g2);
            program_cell(b, perm[static_cast<std::size_t>(r)], c, g1, g2);
        }
    a.exit_programming_mode();
    b.exit_programming_mode();
    std::uniform_real_distribution<double> u(0.9, 1.8);
    for (int t = 0; t < 20; ++t) {
        QueryVector q;
        for (int c = 0; c < 16; ++c) q.values.push_back(u(gen));
        const auto ra = array_search(a, q, {}), rb = array_search(b, q, {});
        for (int r = 0; r < 4; ++r) {
            const auto& x = ra.rows[static_cast<std::size_t>(r)];
            const auto& y = rb.rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
            EXPECT_EQ(x.count, y.count);
            EXPECT_EQ(x.v_ml, y.v_ml);
            EXPECT_EQ(x.sensed, y.sensed);
        }
    }
}

TEST(Search, PureWithRespectToState)
{
    AcamArray a(ArrayConfig{}, kTech);
    a.enter_programming_mode();
    program_cell(a, 0, 0, 5e-6, 100e-6);
    a.exit_programming_mode();
    const auto g = a.conductances();
    QueryVector q{std::vector<double>(32, 1.4)};
    const auto r1 = array_search(a, q, {});
    const auto r2 = array_search(a, q, {});
    EXPECT_EQ(a.conductances(), g);
    EXPECT_EQ(r1.rows[0].v_ml, r2.rows[0].v_ml);
    EXPECT_EQ(r1.rows[0].count, 1);
}

TEST(Search, RejectsMalformedQuery)
{
    const AcamArray a(ArrayConfig{}, kTech);
    EXPECT_THROW(array_search(a, QueryVector{std::vector<double>(31, 1.0)}, {}), LengthMismatch);
    EXPECT_THROW(array_search(a, QueryVector{std::vector<double>(32, 3.5)}, {}), OutOfRange);
}

TEST(Search, CircuitFidelityAgreesAwayFromBounds)
{
    const ArrayConfig cfg{8, 3, 1};
    AcamArray a(cfg, kTech);
    a.enter_programming_mode();
    std::mt19937_64 gen(21);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 8; ++c) {
            double g1 = log_uniform(gen), g2 = log_uniform(gen);
            if (g1 > g2) std::swap(g1, g2);
            program_cell(a, r, c, g1, g2);
        }
    a.exit_programming_mode();
    std::uniform_real_distribution<double> u(0.0, 3.0);
    SearchSettings circuit;
    circuit.fidelity = Fidelity::circuit;
    for (int t = 0; t < 5; ++t) {
        QueryVector q;
        for (int c = 0; c < 8; ++c) {
            double v;
            do {
                v = u(gen);
            } while ([&] {
                for (int r = 0; r < 3; ++r) {
                    const auto& w = a.window(r, c);
                    if (std::abs(v - w.v_low) < 0.05 || std::abs(v - w.v_high) < 0.05) return true;
                }
                return false;
            }());
            q.values.push_back(v);
        }
        const auto rb = array_search(a, q, {}), rc = array_search(a, q, circuit);
        for (int r = 0; r < a.rows(); ++r) {
            EXPECT_EQ(rb.rows[static_cast<std::size_t>(r)].count, rc.rows[static_cast<std::size_t>(r)].count);
            EXPECT_LE(rc.rows[static_cast<std::size_t>(r)].v_ml, rb.rows[static_cast<std::size_t>(r)].v_ml + 1e-9);
        }
    }
}

TEST(Search, RecordsTracesOnRequest)
{
    const AcamArray a(ArrayConfig{4, 2, 0}, kTech);
    SearchSettings s;
    s.record_traces = true;
    const auto res = array_search(a, QueryVector{std::vector<double>(4, 1.0)}, s);
    EXPECT_EQ(res.rows[0].trace.size(), 501u);
    EXPECT_TRUE(array_search(a, QueryVector{std::vector<double>(4, 1.0)}, {}).rows[0].trace.empty());
}

TEST(Sipo, AllZeros)
{
    const auto reg = sipo_load(SipoRegister(48), Bits(48, false));
    for (bool b : reg.parallel_out()) EXPECT_FALSE(b);
}

TEST(Sipo, FirstBitLandsAtFarEnd)
{
    Bits stream(16, false);
    stream[0] = true;
    const auto reg = sipo_load(SipoRegister(16), stream);
    EXPECT_EQ(reg.parallel_out(), stream);
    EXPECT_THROW(sipo_load(SipoRegister(16), Bits(15)), LengthMismatch);
}

TEST(Piso, RowZeroFirstAndRoundTrip)
{
    Bits w(48, false);
    w[0] = true;
    const auto out = piso_load_and_shift(PisoRegister(48), w);
    EXPECT_TRUE(out[0]);
    EXPECT_EQ(out, w);
    std::mt19937_64 gen(48);
    for (int i = 0; i < 1000; ++i) {
        Bits word(48);
        const auto x = gen();
        for (int j = 0; j < 48; ++j) word[static_cast<std::size_t>(j)] = (x >> j) & 1u;
        ASSERT_EQ(piso_load_and_shift(PisoRegister(48), word), word);
        ASSERT_EQ(sipo_load(SipoRegister(48), word).parallel_out(), word);
    }
    EXPECT_THROW(piso_load_and_shift(PisoRegister(48), Bits(47)), LengthMismatch);
}

TEST(Bitstring, RoundTrip)
{
    EXPECT_EQ(to_bitstring(from_bitstring("0110")), "0110");
    EXPECT_THROW(from_bitstring("01x"), ParseError);
}
