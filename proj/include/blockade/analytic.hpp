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

#pragma once

// Weak-excitation solution on the two-photon manifold |psi> ~ |0> + c1|1> + c2|2>
// under H_eff = H - i gamma a^dag a / 2. The periodic (long-time) amplitudes
// are Fourier series built from the drive harmonics eps_k:
//
//   chi1_k     = -i eps_k / (i (delta + k w) + gamma / 2)
//   chi2_{k'k} = -i sqrt(2) eps_k' / (i (k + k') w + 2 i (delta + U) + gamma)
//   c1(t) = sum_k chi1_k e^{i k w t}
//   c2(t) = sum_{k', k} chi2_{k'k} chi1_k e^{i (k + k') w t}
//
// Each (k', k) pair is one two-photon excitation path; blockade appears where
// the paths cancel.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "blockade/dopri5.hpp"
#include "blockade/fock.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

inline Complex chi1(int k, const SystemParams& p, const FourierSeries& series) {
    if (k < -series.k_max || k > series.k_max) throw InvalidArgument("chi1: |k| exceeds k_max");
    return -kI * series.coeff(k) / (kI * (p.delta + k * series.omega_p) + p.gamma / 2.0);
}

inline Complex chi2(int k_prime, int k, const SystemParams& p, const FourierSeries& series) {
    if (std::abs(k) > series.k_max || std::abs(k_prime) > series.k_max)
        throw InvalidArgument("chi2: |k| or |k'| exceeds k_max");
    return -kI * std::numbers::sqrt2 * series.coeff(k_prime) /
           (kI * static_cast<double>(k + k_prime) * series.omega_p + 2.0 * kI * (p.delta + p.u) + p.gamma);
}

/// Precomputed one-photon coefficients chi1_k and the collapsed two-photon
/// harmonics C_s = sum_{k + k' = s} chi2_{k'k} chi1_k.
struct ManifoldAmplitudes {
    SystemParams params;
    FourierSeries series;
    double omega_p = 0.0;
    int k_max = 0;
    std::vector<Complex> chi1;        ///< index k + k_max
    std::vector<Complex> two_photon;  ///< index s + 2 k_max

    Complex chi1_at(int k) const { return chi1[static_cast<std::size_t>(k + k_max)]; }
    Complex chi2_at(int k_prime, int k) const { return blockade::chi2(k_prime, k, params, series); }
};

/// Drive harmonics below this fraction of the largest are left out of the
/// two-photon convolution.
inline constexpr double kHarmonicPruneFraction = 1e-12;

inline ManifoldAmplitudes make_amplitudes(const SystemParams& p, const FourierSeries& series) {
    ManifoldAmplitudes amp;
    amp.params = p;
    amp.series = series;
    amp.omega_p = series.omega_p;
    amp.k_max = series.k_max;
    const int K = series.k_max;
    amp.chi1.resize(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) amp.chi1[static_cast<std::size_t>(k + K)] = chi1(k, p, series);

    double peak = 0.0;
    for (const auto& c : series.coeffs) peak = std::max(peak, std::abs(c));
    std::vector<int> active;
    for (int k = -K; k <= K; ++k)
        if (std::abs(series.coeff(k)) > kHarmonicPruneFraction * peak) active.push_back(k);

    amp.two_photon.assign(static_cast<std::size_t>(4 * K + 1), Complex{0.0, 0.0});
    for (int kp : active)
        for (int k : active)
            amp.two_photon[static_cast<std::size_t>(k + kp + 2 * K)] += chi2(kp, k, p, series) * amp.chi1_at(k);
    return amp;
}

inline Complex c1_series(double t, const ManifoldAmplitudes& amp) {
    Complex sum{0.0, 0.0};
    for (int k = -amp.k_max; k <= amp.k_max; ++k)
        sum += amp.chi1_at(k) * std::exp(Complex(0.0, k * amp.omega_p * t));
    return sum;
}

inline Complex c2_series(double t, const ManifoldAmplitudes& amp) {
    const int K2 = 2 * amp.k_max;
    Complex sum{0.0, 0.0};
    for (int s = -K2; s <= K2; ++s) {
        const Complex c = amp.two_photon[static_cast<std::size_t>(s + K2)];
        if (c != Complex{0.0, 0.0}) sum += c * std::exp(Complex(0.0, s * amp.omega_p * t));
    }
    return sum;
}

/// Sum of chi2_{k'k} chi1_k e^{i(k+k')wt} over the paths accepted by
/// `include(k_prime, k)`, without pruning.
inline Complex two_photon_path_sum(double t, const ManifoldAmplitudes& amp,
                                   const std::function<bool(int, int)>& include) {
    Complex sum{0.0, 0.0};
    for (int kp = -amp.k_max; kp <= amp.k_max; ++kp)
        for (int k = -amp.k_max; k <= amp.k_max; ++k)
            if (include(kp, k))
                sum += amp.chi2_at(kp, k) * amp.chi1_at(k) *
                       std::exp(Complex(0.0, (k + kp) * amp.omega_p * t));
    return sum;
}

/// Populations above this make the two-photon-manifold truncation unreliable.
inline constexpr double kWeakExcitationLimit = 0.1;

struct AnalyticPopulations {
    std::vector<double> p1;
    std::vector<double> p2;
    double max_p1 = 0.0;
    bool weak_excitation_valid = true;
    std::string warning;
};

inline AnalyticPopulations analytic_populations(std::span<const double> t_grid, const SystemParams& p,
                                                const PulseSpec& pulse, int k_max) {
    const auto series = fourier_coeffs(pulse, k_max, p.gamma);
    const auto amp = make_amplitudes(p, series);
    AnalyticPopulations out;
    out.p1.reserve(t_grid.size());
    out.p2.reserve(t_grid.size());
    for (double t : t_grid) {
        out.p1.push_back(std::norm(c1_series(t, amp)));
        out.p2.push_back(std::norm(c2_series(t, amp)));
        out.max_p1 = std::max(out.max_p1, out.p1.back());
    }
    if (out.max_p1 > kWeakExcitationLimit) {
        out.weak_excitation_valid = false;
        out.warning = "weak-excitation assumption violated: max P1 = " + std::to_string(out.max_p1) +
                      " > " + std::to_string(kWeakExcitationLimit);
    }
    return out;
}

struct ManifoldTrajectory {
    std::vector<double> times;
    std::vector<Complex> c1;
    std::vector<Complex> c2;
};

/// Direct integration of the amplitude equations from c1 = c2 = 0:
///   c1' = (-i delta - gamma/2) c1 - i eps(t)
///   c2' = (-2i (delta + U) - gamma) c2 - i sqrt(2) eps(t) c1
inline ManifoldTrajectory integrate_manifold_ode(double t_end, const SystemParams& p, const PulseSpec& pulse,
                                                 double dt_out = 0.01, Dopri5Options opts = {1e-10, 1e-14}) {
    if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
    if (!(dt_out > 0.0)) throw InvalidArgument("dt_out must be positive");
    validate(pulse);
    using State = Eigen::Vector2cd;
    const Complex a1 = Complex(-p.gamma / 2.0, -p.delta);
    const Complex a2 = Complex(-p.gamma, -2.0 * (p.delta + p.u));
    auto rhs = [&](double t, const State& c, State& dc) {
        const double eps = envelope(pulse, t, p.gamma);
        dc[0] = a1 * c[0] - kI * eps;
        dc[1] = a2 * c[1] - kI * std::numbers::sqrt2 * eps * c[0];
    };
    ManifoldTrajectory out;
    const auto n_samples = static_cast<std::size_t>(std::floor(t_end / dt_out + 1e-9)) + 1;
    std::size_t next = 0;
    auto observer = [&](const DenseStep<State>& step) {
        while (next < n_samples) {
            const double ts = static_cast<double>(next) * dt_out;
            if (ts > step.t1 + 1e-12 * (1.0 + step.t1)) break;
            const State c = step.eval(std::min(ts, step.t1));
            out.times.push_back(ts);
            out.c1.push_back(c[0]);
            out.c2.push_back(c[1]);
            ++next;
        }
    };
    Dopri5<State> integrator(opts);
    const auto stops = breakpoints(pulse, 0.0, t_end);
    integrator.integrate(rhs, State::Zero(), 0.0, t_end, stops, observer);
    return out;
}

}  // namespace blockade
