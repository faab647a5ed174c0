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
#include <vector>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "blockade/dopri5.hpp"

namespace blockade {
namespace {

using Vec1 = Eigen::Matrix<double, 1, 1>;
using CVec2 = Eigen::Vector2cd;

TEST(Dopri5, ExponentialDecay) {
    Dopri5<Vec1> solver({1e-10, 1e-12});
    const auto y = solver.integrate([](double, const Vec1& y, Vec1& dy) { dy = -y; }, Vec1::Constant(1.0), 0.0, 3.0);
    EXPECT_NEAR(y[0], std::exp(-3.0), 1e-9);
    EXPECT_GT(solver.stats().accepted, 0u);
}

TEST(Dopri5, ComplexRotationAndDenseOutput) {
    const double w = 2.3;
    auto rhs = [w](double, const CVec2& y, CVec2& dy) {
        dy[0] = std::complex<double>(0.0, w) * y[0];
        dy[1] = std::complex<double>(-0.5, -w) * y[1];
    };
    CVec2 y0(1.0, std::complex<double>(0.0, 1.0));
    double worst = 0.0;
    std::size_t calls = 0;
    Dopri5<CVec2> solver({1e-9, 1e-12});
    const auto y = solver.integrate(rhs, y0, 0.0, 10.0, {}, [&](const DenseStep<CVec2>& s) {
        ++calls;
        for (double f : {0.25, 0.5, 0.75}) {
            const double t = s.t0 + f * (s.t1 - s.t0);
            const CVec2 v = s.eval(t);
            worst = std::max(worst, std::abs(v[0] - std::exp(std::complex<double>(0.0, w * t))));
            worst = std::max(worst, std::abs(v[1] - y0[1] * std::exp(std::complex<double>(-0.5, -w) * t)));
        }
    });
    EXPECT_EQ(calls, solver.stats().accepted);
    EXPECT_NEAR(std::abs(y[0] - std::exp(std::complex<double>(0.0, w * 10.0))), 0.0, 1e-7);
    EXPECT_LT(worst, 1e-7);
}

TEST(Dopri5, DenseOutputHitsEndpoints) {
    Dopri5<Vec1> solver;
    solver.integrate([](double t, const Vec1&, Vec1& dy) { dy[0] = std::cos(t); }, Vec1::Zero(), 0.0, 2.0, {},
                     [](const DenseStep<Vec1>& s) {
                         EXPECT_NEAR(s.eval(s.t0)[0], std::sin(s.t0), 1e-8);
                         EXPECT_NEAR(s.eval(s.t1)[0], std::sin(s.t1), 1e-8);
                     });
}

TEST(Dopri5, StepsLandOnStops) {
    const std::vector<double> stops{0.3, 1.7, 1.7, -1.0, 2.2, 5.0};
    std::vector<double> ends;
    Dopri5<Vec1> solver;
    // A kink in the forcing at each stop.
    auto rhs = [](double t, const Vec1&, Vec1& dy) {
        dy[0] = std::abs(t - 0.3) + std::abs(t - 1.7) + std::abs(t - 2.2);
    };
    const auto y = solver.integrate(rhs, Vec1::Zero(), 0.0, 3.0, stops,
                                    [&](const DenseStep<Vec1>& s) { ends.push_back(s.t1); });
    for (double s : {0.3, 1.7, 2.2, 3.0})
        EXPECT_NE(std::find(ends.begin(), ends.end(), s), ends.end()) << "missing stop " << s;
    // 3.69 + 2.29 + 2.74; each step sees a linear integrand.
    EXPECT_NEAR(y[0], 8.72, 1e-12);
    for (std::size_t i = 1; i < ends.size(); ++i) EXPECT_GT(ends[i], ends[i - 1]);
}

TEST(Dopri5, ToleranceControlsError) {
    auto rhs = [](double t, const Vec1& y, Vec1& dy) { dy[0] = -2.0 * t * y[0]; };
    double prev = 1.0;
    for (double tol : {1e-4, 1e-7, 1e-10}) {
        Dopri5<Vec1> solver({tol, tol * 1e-2});
        const auto y = solver.integrate(rhs, Vec1::Constant(1.0), 0.0, 2.0);
        const double err = std::abs(y[0] - std::exp(-4.0));
        EXPECT_LT(err, std::max(10.0 * tol, 1e-14));
        EXPECT_LE(err, prev);
        prev = err;
    }
}

TEST(Dopri5, Errors) {
    Dopri5<Vec1> solver;
    auto rhs = [](double, const Vec1& y, Vec1& dy) { dy = -y; };
    EXPECT_THROW(solver.integrate(rhs, Vec1::Constant(1.0), 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(Dopri5<Vec1>({0.0, 1e-9}), InvalidArgument);

    Dopri5Options opts;
    opts.max_steps = 5;
    Dopri5<Vec1> capped(opts);
    try {
        capped.integrate([](double t, const Vec1&, Vec1& dy) { dy[0] = std::sin(50.0 * t); }, Vec1::Zero(), 0.0,
                         100.0);
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LT(e.time(), 100.0);
    }

    Dopri5<Vec1> blowup;
    EXPECT_THROW(blowup.integrate([](double, const Vec1& y, Vec1& dy) { dy[0] = y[0] * y[0]; },
                                  Vec1::Constant(1.0), 0.0, 2.0),
                 IntegrationError);
}

}  // namespace
}  // namespace blockade
