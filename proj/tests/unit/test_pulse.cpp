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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "blockade/pulse.hpp"

namespace blockade {
namespace {

using std::numbers::pi;
using cd = std::complex<double>;

const GaussianTrain kGauss{0.1, 5.27, 5.0};
const RectTrain kRect{0.075, 0.22, 2.5, 0.22, 8.0};

// Composite Simpson over [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Brute-force train value: sum over many pulse centres.
double gaussian_brute(const GaussianTrain& p, double t, double gamma = 1.0) {
    double s = 0.0;
    for (int m = -400; m <= 400; ++m) {
        const double x = p.a * gamma * (t - m * p.period);
        s += std::exp(-x * x);
    }
    return p.eps_p * p.a / std::sqrt(pi) * s;
}

// Exact (1/T) int f(t) e^{-iwt} dt for the piecewise-linear envelope.
cd rect_coeff_exact(const RectTrain& r, int k) {
    const double T = r.period, w = 2.0 * pi * k / T;
    auto segment = [&](double a, double b, double fa, double fb) -> cd {
        if (!(b > a)) return 0.0;
        if (k == 0) return 0.5 * (fa + fb) * (b - a);
        const double beta = (fb - fa) / (b - a);
        auto prim = [&](double t, double ft) {
            return std::exp(cd(0.0, -w * t)) * (cd(0.0, ft / w) + beta / (w * w));
        };
        return prim(b, fb) - prim(a, fa);
    };
    const cd total = segment(0.0, r.t_r, 0.0, r.eps_m) + segment(r.t_r, r.t2(), r.eps_m, r.eps_m) +
                     segment(r.t2(), r.t3(), r.eps_m, 0.0);
    return total / T;
}

TEST(GaussianTrain, PeakAndTrough) {
    const double peak = 0.1 * 5.27 / std::sqrt(pi);
    EXPECT_NEAR(gaussian_envelope(kGauss, 0.0), peak, 1e-15);
    EXPECT_NEAR(gaussian_envelope(kGauss, 0.0), 0.29733, 1e-5);
    EXPECT_LT(gaussian_envelope(kGauss, 2.5), 1e-100);
    EXPECT_NEAR(gaussian_envelope(kGauss, 5.0), peak, 1e-15);
}

TEST(GaussianTrain, MatchesBruteForceInBothRegimes) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<> ut(-20.0, 40.0);
    for (const GaussianTrain& p : {kGauss, GaussianTrain{0.3, 0.1, 5.0}, GaussianTrain{0.2, 0.5, 4.9},
                                   GaussianTrain{0.05, 2.0, 1.0}}) {
        for (int i = 0; i < 50; ++i) {
            const double t = ut(rng);
            const double ref = gaussian_brute(p, t);
            EXPECT_NEAR(gaussian_envelope(p, t), ref, 1e-12 * std::max(1.0, ref)) << "A=" << p.a << " t=" << t;
        }
    }
}

TEST(GaussianTrain, PulseAreaIsEpsP) {
    for (const GaussianTrain& p : {kGauss, GaussianTrain{0.3, 0.2, 5.0}, GaussianTrain{1.0, 10.0, 3.0}}) {
        const double area = simpson([&](double t) { return gaussian_envelope(p, t); }, 0.0, p.period, 20000);
        EXPECT_NEAR(area, p.eps_p, 1e-9) << "A=" << p.a;
    }
}

TEST(GaussianTrain, GammaScalesTime) {
    // eps(t; gamma, T / gamma) = eps(gamma t; 1, T) when A is held fixed.
    const GaussianTrain p{0.2, 3.0, 4.0};
    const GaussianTrain scaled{0.2, 3.0, 2.0};
    for (double t : {0.0, 0.1, 0.37, 1.0, 1.9}) EXPECT_NEAR(gaussian_envelope(scaled, t, 2.0), gaussian_envelope(p, 2.0 * t), 1e-14);
}

TEST(RectTrain, Shape) {
    const RectTrain r = kRect;
    EXPECT_NEAR(rect_envelope(r, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(rect_envelope(r, r.t_r / 2), r.eps_m / 2, 1e-15);
    EXPECT_NEAR(rect_envelope(r, r.t_r), r.eps_m, 1e-15);
    EXPECT_NEAR(rect_envelope(r, r.t_r + r.t_w / 2), r.eps_m, 1e-15);
    EXPECT_NEAR(rect_envelope(r, r.t2() + r.t_f / 2), r.eps_m / 2, 1e-15);
    EXPECT_NEAR(rect_envelope(r, (r.t3() + r.period) / 2), 0.0, 1e-15);
}

TEST(RectTrain, ContinuousAtCorners) {
    const RectTrain r = kRect;
    for (double c : {0.0, r.t_r, r.t2(), r.t3(), r.period}) {
        const double l = rect_envelope(r, c - 1e-10), h = rect_envelope(r, c + 1e-10);
        EXPECT_NEAR(l, h, 1e-8) << "corner " << c;
    }
}

TEST(Envelope, PeriodicNonNegativeAndBounded) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<> ut(-50.0, 50.0);
    for (const PulseSpec& pulse : {PulseSpec{kGauss}, PulseSpec{kRect}, PulseSpec{GaussianTrain{0.4, 0.3, 2.0}}}) {
        const double T = period(pulse);
        double cap = 0.0;
        if (const auto* g = std::get_if<GaussianTrain>(&pulse)) cap = gaussian_brute(*g, 0.0);
        else cap = std::get<RectTrain>(pulse).eps_m;
        for (int i = 0; i < 200; ++i) {
            const double t = ut(rng);
            const double v = envelope(pulse, t);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, cap * (1 + 1e-12));
            EXPECT_NEAR(envelope(pulse, t + T), v, 1e-12);
            EXPECT_NEAR(envelope(pulse, t - 3 * T), v, 1e-12);
        }
    }
}

TEST(Envelope, Validation) {
    EXPECT_THROW(validate(PulseSpec{RectTrain{0.1, 2.0, 5.0, 2.0, 8.0}}), InvalidArgument);
    EXPECT_THROW(validate(PulseSpec{RectTrain{0.1, 0.0, 5.0, 2.0, 8.0}}), InvalidArgument);
    EXPECT_THROW(validate(PulseSpec{GaussianTrain{0.1, -1.0, 5.0}}), InvalidArgument);
    EXPECT_THROW(validate(PulseSpec{GaussianTrain{0.1, 1.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(validate(PulseSpec{GaussianTrain{-0.1, 1.0, 5.0}}), InvalidArgument);
    EXPECT_NO_THROW(validate(PulseSpec{RectTrain{0.1, 2.0, 4.0, 2.0, 8.0}}));
}

TEST(Breakpoints, IncludeEveryCorner) {
    const auto bp = breakpoints(kRect, 0.0, 16.0);
    for (double c : {0.0, 0.22, 2.72, 2.94, 8.0, 8.22, 10.72, 10.94, 16.0}) {
        bool hit = false;
        for (double b : bp) hit |= std::abs(b - c) < 1e-12;
        EXPECT_TRUE(hit) << c;
    }
    EXPECT_EQ(breakpoints(kGauss, 0.1, 14.0).size(), 2u);
}

TEST(Fourier, GaussianClosedForm) {
    const auto fs = fourier_coeffs(kGauss, 50);
    const double w = 2.0 * pi / kGauss.period;
    EXPECT_NEAR(fs.coeff(0).real(), 0.02, 1e-9);
    for (int k = -50; k <= 50; ++k) {
        const double ref = 0.1 / 5.0 * std::exp(-k * k * w * w / (4 * 5.27 * 5.27));
        EXPECT_NEAR(std::abs(fs.coeff(k) - ref), 0.0, 1e-10) << k;
    }
}

TEST(Fourier, RectClosedForm) {
    for (const RectTrain& r : {kRect, RectTrain{0.1, 0.5, 0.0, 1.5, 3.0}, RectTrain{0.2, 1.0, 1.0, 1.0, 3.0}}) {
        const auto fs = fourier_coeffs(r, 400);
        EXPECT_NEAR(fs.coeff(0).real(), r.eps_m * (r.t_w + 0.5 * (r.t_r + r.t_f)) / r.period, 1e-12);
        for (int k = -400; k <= 400; ++k)
            EXPECT_LT(std::abs(fs.coeff(k) - rect_coeff_exact(r, k)), 1e-10) << "k=" << k;
    }
}

TEST(Fourier, RealitySymmetry) {
    for (const PulseSpec& pulse : {PulseSpec{kGauss}, PulseSpec{kRect}}) {
        const auto fs = fourier_coeffs(pulse, 60);
        for (int k = 0; k <= 60; ++k) EXPECT_EQ(fs.coeff(-k), std::conj(fs.coeff(k)));
    }
}

TEST(Fourier, Parseval) {
    for (const PulseSpec& pulse : {PulseSpec{kGauss}, PulseSpec{kRect}}) {
        const double T = period(pulse);
        const int K = is_gaussian(pulse) ? 50 : 1000;
        const auto fs = fourier_coeffs(pulse, K);
        double lhs = 0.0;
        for (int k = -K; k <= K; ++k) lhs += std::norm(fs.coeff(k));
        std::vector<double> cuts{0.0, T / 2, T};
        if (const auto* r = std::get_if<RectTrain>(&pulse)) cuts = {0.0, r->t_r, r->t2(), r->t3(), T};
        double rhs = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            rhs += simpson([&](double t) { return std::pow(envelope(pulse, t), 2); }, cuts[i], cuts[i + 1], 4000);
        EXPECT_NEAR(lhs / (rhs / T), 1.0, 1e-6);
    }
}

TEST(Fourier, GaussianReconstruction) {
    const auto fs = fourier_coeffs(kGauss, 50);
    for (double t = -5.0; t < 10.0; t += 0.0137) EXPECT_NEAR(reconstruct(fs, t), gaussian_envelope(kGauss, t), 1e-9);
}

TEST(Fourier, RectReconstructionConverges) {
    const RectTrain& r = kRect;
    double prev = 1e300;
    for (int K : {50, 100, 200, 400}) {
        const auto fs = fourier_coeffs(r, K);
        double worst = 0.0;
        for (double t = 0.0; t < r.period; t += 0.01) worst = std::max(worst, std::abs(reconstruct(fs, t) - rect_envelope(r, t)));
        EXPECT_LT(worst, prev) << K;
        prev = worst;
    }
    const auto fs = fourier_coeffs(r, 400);
    EXPECT_NEAR(reconstruct(fs, r.t_r + r.t_w / 2), r.eps_m, 1e-3 * r.eps_m);
    EXPECT_NEAR(reconstruct(fs, (r.t3() + r.period) / 2), 0.0, 1e-3 * r.eps_m);
}

TEST(Fourier, ZeroAmplitude) {
    const auto fs = fourier_coeffs(RectTrain{0.0, 0.2, 1.0, 0.2, 4.0}, 30);
    for (int k = -30; k <= 30; ++k) EXPECT_EQ(fs.coeff(k), cd(0.0, 0.0));
    EXPECT_EQ(reconstruct(fs, 1.3), 0.0);
}

TEST(Fourier, Errors) {
    EXPECT_THROW(fourier_coeffs(kGauss, 0), InvalidArgument);
    FourierSeries bad;
    bad.omega_p = 1.0;
    bad.k_max = 1;
    bad.coeffs = {cd(0.0, 0.0), cd(1.0, 0.0), cd(0.5, 0.0)};
    EXPECT_THROW(reconstruct(bad, 0.3), SymmetryError);
}

}  // namespace
}  // namespace blockade
