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

#include "oracles.hpp"

#include "txl/device.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace txl;

namespace {

constexpr double kGmin = 2e-6;
constexpr double kGmax = 200e-6;

HybridInverter make_inverter(double g_top, double g_bottom, MosfetParams p = MosfetParams::pmos(),
                             MosfetParams n = MosfetParams::nmos(), double vdd = 3.0)
{
    return {ResistiveElement::rram(g_top, kGmin, kGmax), ResistiveElement::polysilicon(g_bottom), p, n, vdd};
}

oracle::Inverter to_oracle(const HybridInverter& inv)
{
    return {inv.nmos.v_t, inv.nmos.k, inv.pmos.v_t, inv.pmos.k, inv.top_element.conductance(),
            inv.bottom_element.conductance(), inv.vdd};
}

const MosfetParams kMatchedP = MosfetParams::pmos(0.8, 200e-6);

} // namespace

TEST(Mosfet, CutoffAndZeroBias)
{
    const auto n = MosfetParams::nmos(0.8, 200e-6);
    EXPECT_EQ(mosfet_current(n, 0.5, 3.0), 0.0);
    EXPECT_EQ(mosfet_current(n, 2.5, 0.0), 0.0);
    EXPECT_EQ(mosfet_current(n, 1.2, 0.0), 0.0);
}

TEST(Mosfet, SaturationClosedForm)
{
    const auto n = MosfetParams::nmos(0.8, 200e-6, 0.0);
    // (200u / 2) * (1.8 - 0.8)^2
    EXPECT_NEAR(mosfet_current(n, 1.8, 3.0), 100e-6, 1e-15);
}

TEST(Mosfet, TriodeClosedForm)
{
    const auto n = MosfetParams::nmos(0.8, 200e-6, 0.1);
    // k((vgs-vt) vds - vds^2/2)(1 + lambda vds) at vgs = 2.0, vds = 0.5
    EXPECT_NEAR(mosfet_current(n, 2.0, 0.5), 200e-6 * (1.2 * 0.5 - 0.125) * 1.05, 1e-15);
}

TEST(Mosfet, PmosMirrorsNmos)
{
    const auto n = MosfetParams::nmos(0.7, 150e-6, 0.02);
    auto p = n;
    p.polarity = Polarity::p;
    for (double vgs : {0.3, 1.1, 2.4})
        for (double vds : {0.05, 0.6, 2.0}) EXPECT_DOUBLE_EQ(mosfet_current(p, -vgs, -vds), mosfet_current(n, vgs, vds));
}

TEST(Mosfet, ReverseBiasSwapsTerminals)
{
    const auto n = MosfetParams::nmos();
    EXPECT_DOUBLE_EQ(mosfet_current(n, 2.0, -0.3), -mosfet_current(n, 2.3, 0.3));
}

TEST(Mosfet, ContinuousAtSaturationEdge)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto m = MosfetParams::nmos(0.4 + 0.8 * u(gen), 50e-6 + 400e-6 * u(gen), 0.1 * u(gen));
        const double vgs = m.v_t + 0.05 + 2.0 * u(gen);
        const double edge = vgs - m.v_t;
        EXPECT_LE(std::abs(mosfet_current(m, vgs, edge + 1e-6) - mosfet_current(m, vgs, edge - 1e-6)), 1e-9);
    }
}

TEST(ResistiveElement, RangeAndImmutability)
{
    EXPECT_THROW(ResistiveElement::rram(1e-6, kGmin, kGmax), OutOfRange);
    const auto poly = ResistiveElement::polysilicon(20e-6);
    EXPECT_EQ(rram_read(poly), 20e-6);
    EXPECT_THROW(rram_write(poly, 30e-6, 1), ImmutableDevice);
}

TEST(ResistiveElement, ZeroSigmaWriteIsExact)
{
    const auto e = ResistiveElement::rram(20e-6, kGmin, kGmax, 0.0);
    const auto w = rram_write(e, 50e-6, 99);
    EXPECT_EQ(rram_read(w), 50e-6);
    EXPECT_EQ(rram_read(w), rram_read(w));
    EXPECT_EQ(rram_read(e), 20e-6);
}

TEST(ResistiveElement, WriteRejectsOutOfRangeTarget)
{
    const auto e = ResistiveElement::rram(20e-6, kGmin, kGmax, 0.05);
    EXPECT_THROW(rram_write(e, 250e-6, 1), OutOfRange);
    EXPECT_THROW(rram_write(e, 1e-6, 1), OutOfRange);
}

TEST(ResistiveElement, NoisyWriteStatistics)
{
    const auto e = ResistiveElement::rram(20e-6, kGmin, kGmax, 0.05);
    double s = 0.0, s2 = 0.0;
    constexpr int n = 10000;
    for (int i = 0; i < n; ++i) {
        const double g = rram_read(rram_write(e, 50e-6, static_cast<std::uint64_t>(i)));
        ASSERT_GE(g, kGmin);
        ASSERT_LE(g, kGmax);
        const double rel = g / 50e-6 - 1.0;
        s += rel;
        s2 += rel * rel;
    }
    const double mean = s / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    EXPECT_NEAR(sd, 0.05, 0.003);
    EXPECT_NEAR(mean, 0.0, 0.003);
}

TEST(ResistiveElement, SeededWriteIsReproducible)
{
    const auto e = ResistiveElement::rram(20e-6, kGmin, kGmax, 0.05);
    EXPECT_EQ(rram_read(rram_write(e, 80e-6, 1234)), rram_read(rram_write(e, 80e-6, 1234)));
    EXPECT_NE(rram_read(rram_write(e, 80e-6, 1234)), rram_read(rram_write(e, 80e-6, 1235)));
}

TEST(InverterVtc, RailSaturation)
{
    const auto inv = make_inverter(20e-6, 20e-6, kMatchedP);
    EXPECT_NEAR(inverter_vtc(inv, 0.0), 3.0, 1e-6);
    EXPECT_NEAR(inverter_vtc(inv, 3.0), 0.0, 1e-6);
}

TEST(InverterVtc, RejectsInputOutsideSupply)
{
    const auto inv = make_inverter(20e-6, 20e-6);
    EXPECT_THROW(inverter_vtc(inv, -0.1), OutOfRange);
    EXPECT_THROW(inverter_vtc(inv, 3.1), OutOfRange);
}

TEST(InverterVtc, WeakPullUpLowersCurve)
{
    const auto inv = make_inverter(5e-6, 20e-6, kMatchedP);
    const double v = inverter_vtc(inv, 1.5);
    EXPECT_LT(v, 1.5);
    EXPECT_NEAR(v, oracle::vtc_sweep(to_oracle(inv), 1.5), 1.5e-3);
}

TEST(InverterVtc, AgreesWithOutputSweepOffTheVerticalSegment)
{
    const auto inv = make_inverter(50e-6, 20e-6);
    const auto o = to_oracle(inv);
    const double th = inverter_threshold(inv);
    for (int i = 0; i <= 30; ++i) {
        const double v_in = 0.1 * i;
        if (std::abs(v_in - th) < 0.02) continue;
        EXPECT_NEAR(inverter_vtc(inv, v_in), oracle::vtc_sweep(o, v_in), 1.5e-3) << "v_in=" << v_in;
    }
}

TEST(InverterVtc, MonotoneOnMillivoltGrid)
{
    const auto inv = make_inverter(7e-6, 35e-6);
    double prev = inverter_vtc(inv, 0.0);
    for (int i = 1; i <= 3000; ++i) {
        const double v = inverter_vtc(inv, i * 1e-3);
        ASSERT_LE(v, prev + 1e-6) << "v_in=" << i * 1e-3;
        prev = v;
    }
}

TEST(InverterThreshold, SymmetricInverterSitsAtMidSupply)
{
    EXPECT_NEAR(inverter_threshold(make_inverter(20e-6, 20e-6, kMatchedP)), 1.5, 1e-3);
    EXPECT_NEAR(inverter_threshold(make_inverter(150e-6, 150e-6, kMatchedP)), 1.5, 1e-3);
}

TEST(InverterThreshold, StrongerPullUpRaisesThreshold)
{
    const double sym = inverter_threshold(make_inverter(20e-6, 20e-6, kMatchedP));
    const auto strong = make_inverter(80e-6, 20e-6, kMatchedP);
    const double th = inverter_threshold(strong);
    EXPECT_GT(th, sym);
    EXPECT_NEAR(th, oracle::threshold_sweep(to_oracle(strong)), 2e-3);
}

TEST(InverterThreshold, DecreasesAsTopConductanceFalls)
{
    double prev = INFINITY;
    for (int i = 0; i < 10; ++i) {
        const double g = kGmax * std::pow(kGmin / kGmax, i / 9.0);
        const auto inv = make_inverter(g, 20e-6);
        const double th = inverter_threshold(inv);
        EXPECT_LT(th, prev);
        EXPECT_NEAR(th, oracle::threshold_sweep(to_oracle(inv)), 2e-3);
        prev = th;
    }
}

TEST(InverterThreshold, RisesAsBottomConductanceFalls)
{
    double prev = -INFINITY;
    for (int i = 0; i < 10; ++i) {
        const double g = kGmax * std::pow(kGmin / kGmax, i / 9.0);
        const double th = inverter_threshold(make_inverter(20e-6, g));
        EXPECT_GT(th, prev);
        prev = th;
    }
}

TEST(InverterThreshold, MatchesInputSweepForRandomInverters)
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_g = [&] { return kGmin * std::pow(kGmax / kGmin, u(gen)); };
    for (int i = 0; i < 100; ++i) {
        const auto n = MosfetParams::nmos(0.5 + 0.5 * u(gen), 50e-6 + 350e-6 * u(gen));
        const auto p = MosfetParams::pmos(0.5 + 0.5 * u(gen), 50e-6 + 350e-6 * u(gen));
        const auto inv = make_inverter(log_g(), log_g(), p, n);
        EXPECT_NEAR(inverter_threshold(inv), oracle::threshold_sweep(to_oracle(inv)), 2e-3) << "draw " << i;
    }
}

TEST(InverterThreshold, DegenerateSupplyHasNoCrossing)
{
    // pull-up never conducts, so the output never rises to vdd/2
    const auto inv = make_inverter(20e-6, 20e-6, MosfetParams::pmos(3.5), MosfetParams::nmos(0.8), 3.0);
    EXPECT_THROW(inverter_threshold(inv), NoCrossing);
}
