// Copyright 2026 The Blockade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <sstream>

#include <gtest/gtest.h>

#include "blockade/evolve.hpp"

namespace blockade {
namespace {

using cd = std::complex<double>;

const SystemParams kGaussRef{0.5, 0.05, 1.0, 10};
const GaussianTrain kGaussRefPulse{0.1, 5.27, 5.0};
const RectTrain kRectRefPulse{0.465, 0.468, 0.372, 0.016, 4.365};

// Linear mode amplitude: alpha' = -(i delta + gamma/2) alpha - i eps(t), by
// fixed-step RK4.
std::vector<cd> coherent_amplitude(const SystemParams& p, const PulseSpec& pulse, double dt, double t_end,
                                   double h = 2e-4) {
    auto f = [&](double t, cd a) { return -cd(p.gamma / 2, p.delta) * a - cd(0.0, envelope(pulse, t, p.gamma)); };
    std::vector<cd> out;
    cd a = 0.0;
    const int sub = static_cast<int>(std::lround(dt / h));
    const int n = static_cast<int>(std::lround(t_end / dt));
    out.push_back(a);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < sub; ++j) {
            const double t = i * dt + j * h;
            const cd k1 = f(t, a), k2 = f(t + h / 2, a + h / 2 * k1), k3 = f(t + h / 2, a + h / 2 * k2),
                     k4 = f(t + h, a + h * k3);
            a += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(a);
    }
    return out;
}

TEST(Evolve, ZeroDriveStaysInVacuum) {
    for (const PulseSpec& pulse : {PulseSpec{GaussianTrain{0.0, 5.27, 5.0}}, PulseSpec{RectTrain{0.0, 0.2, 1.0, 0.2, 4.0}}}) {
        const auto ev = simulate(kGaussRef, pulse, {});
        for (std::size_t i = 0; i < ev.trajectory.size(); ++i) {
            EXPECT_EQ(ev.trajectory.n[i], 0.0);
            EXPECT_FALSE(ev.trajectory.g2[i].has_value());
            EXPECT_EQ(ev.trajectory.p1[i], 0.0);
        }
        EXPECT_FALSE(ev.minima.g2.found());
    }
}

TEST(Evolve, SampleGridAndDefaults) {
    const auto ev = simulate(kGaussRef, kGaussRefPulse);
    EXPECT_DOUBLE_EQ(ev.t_end, 50.0);
    EXPECT_DOUBLE_EQ(ev.minima.window_start, 25.0);
    const auto& tr = ev.trajectory;
    ASSERT_EQ(tr.size(), 5001u);
    EXPECT_EQ(tr.n.size(), tr.size());
    EXPECT_EQ(tr.p2.size(), tr.size());
    for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_NEAR(tr.times[i] - tr.times[i - 1], 0.01, 1e-12);
    EXPECT_DOUBLE_EQ(default_t_end(RectTrain{0.1, 0.1, 0.1, 0.1, 2.0}), 30.0);
}

TEST(Evolve, InvariantsAtEverySample) {
    EvolveOptions opts;
    opts.keep_states = true;
    opts.t_end = 20.0;
    for (const PulseSpec& pulse : {PulseSpec{kGaussRefPulse}, PulseSpec{kRectRefPulse}}) {
        const auto tr = evolve(kGaussRef, pulse, opts);
        ASSERT_EQ(tr.states.size(), tr.size());
        for (const auto& rho : tr.states) {
            const auto d = diagnose_density(rho, true);
            EXPECT_LT(d.trace_error, 1e-6);
            EXPECT_LT(d.hermiticity, 1e-8);
            EXPECT_GT(d.min_eigenvalue, -1e-8);
        }
    }
}

TEST(Evolve, CoherentStateOracle) {
    const SystemParams linear{0.5, 0.0, 1.0, 10};
    for (const PulseSpec& pulse : {PulseSpec{kGaussRefPulse}, PulseSpec{kRectRefPulse},
                                   PulseSpec{GaussianTrain{0.4, 0.5, 3.0}}}) {
        EvolveOptions opts;
        opts.t_end = 30.0;
        const auto tr = evolve(linear, pulse, opts);
        const auto alpha = coherent_amplitude(linear, pulse, opts.dt_out, opts.t_end);
        ASSERT_EQ(alpha.size(), tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double n = tr.n[i];
            EXPECT_NEAR(n, std::norm(alpha[i]), 1e-8 + 1e-5 * n) << "t=" << tr.times[i];
            if (n > 1e-6) {
                ASSERT_TRUE(tr.g2[i].has_value());
                EXPECT_NEAR(*tr.g2[i], 1.0, 1e-3) << "t=" << tr.times[i];
            }
            EXPECT_NEAR(tr.p0[i], std::exp(-n), 1e-4);
            EXPECT_NEAR(tr.p1[i], n * std::exp(-n), 1e-4);
            EXPECT_NEAR(tr.p2[i], n * n / 2 * std::exp(-n), 1e-4);
        }
    }
}

TEST(Evolve, WeakDriveScaling) {
    EvolveOptions opts;
    opts.t_end = 25.0;
    GaussianTrain half = kGaussRefPulse;
    half.eps_p /= 2;
    const auto full = evolve(kGaussRef, kGaussRefPulse, opts);
    const auto low = evolve(kGaussRef, half, opts);
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full.n[i] < 1e-8) continue;
        EXPECT_NEAR(low.n[i] / full.n[i], 0.25, 0.02 * 0.25) << "t=" << full.times[i];
    }
}

TEST(Evolve, GaussianReferenceMatchesIndependentSolver) {
    // Reference from an independent tight-tolerance solver of the same model.
    const auto ev = simulate(kGaussRef, kGaussRefPulse);
    ASSERT_TRUE(ev.minima.g2.found());
    EXPECT_NEAR(ev.minima.n.value, 3.209e-5, 0.01 * 3.209e-5);
    EXPECT_NEAR(ev.minima.g2.value, 4.15e-4, 0.04 * 4.15e-4);
    EXPECT_GE(ev.minima.g2.time, ev.minima.window_start);
}

TEST(Evolve, RefinedMinimaNeverExceedSamples) {
    const auto ev = simulate(kGaussRef, kGaussRefPulse);
    const auto& tr = ev.trajectory;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.times[i] < ev.minima.window_start) continue;
        EXPECT_LE(ev.minima.n.value, tr.n[i]);
        EXPECT_LE(ev.minima.p2.value, tr.p2[i]);
        if (tr.g2[i]) {
            EXPECT_LE(ev.minima.g2.value, *tr.g2[i]);
        }
    }
}

TEST(Evolve, TruncationConvergence) {
    const auto a = simulate(kGaussRef, kGaussRefPulse);
    SystemParams big = kGaussRef;
    big.fock_dim = 15;
    const auto b = simulate(big, kGaussRefPulse);
    EXPECT_LT(std::abs(a.minima.g2.value / b.minima.g2.value - 1.0), 1e-6);
    EXPECT_LT(std::abs(a.minima.n.value / b.minima.n.value - 1.0), 1e-6);
}

TEST(Evolve, MinimumPhotonNumberDuringRise) {
    const auto ev = simulate(kGaussRef, kGaussRefPulse);
    const double T = kGaussRefPulse.period;
    const double phase = wrap_time(ev.minima.n.time, T);
    // The envelope rises from its trough at T/2 towards the next peak at T.
    EXPECT_GT(phase, T / 2);
    EXPECT_LT(phase, T);
}

TEST(Evolve, Validation) {
    EvolveOptions opts;
    opts.dt_out = 0.0;
    EXPECT_THROW(simulate(kGaussRef, kGaussRefPulse, opts), InvalidArgument);
    opts = {};
    opts.window_start_frac = 1.0;
    EXPECT_THROW(simulate(kGaussRef, kGaussRefPulse, opts), InvalidArgument);
    EXPECT_THROW(simulate(SystemParams{0.5, 0.05, -1.0, 10}, kGaussRefPulse), InvalidArgument);
    EXPECT_THROW(simulate(kGaussRef, RectTrain{0.1, 3.0, 3.0, 3.0, 8.0}), InvalidArgument);
}

TEST(Evolve, CsvFormat) {
    EvolveOptions opts;
    opts.t_end = 0.05;
    const auto tr = evolve(kGaussRef, kGaussRefPulse, opts);
    std::ostringstream os;
    write_trajectory_csv(os, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "t,eps,n,g2,P0,P1,P2");
    std::getline(is, line);
    // Vacuum at t = 0: g2 undefined.
    EXPECT_EQ(line.substr(0, 2), "0,");
    EXPECT_NE(line.find(",,"), std::string::npos);
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 6);
}

}  // namespace
}  // namespace blockade
