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

// Drive envelopes for periodic Gaussian and rectangular (trapezoidal) pulse
// trains, and their complex Fourier series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blockade/errors.hpp"

namespace blockade {

/// eps(t) = (eps_p A / sqrt(pi)) sum_m exp[-A^2 gamma^2 (t - m T)^2].
/// Each pulse carries area eps_p / gamma.
struct GaussianTrain {
    double eps_p = 0.0;
    double a = 1.0;  ///< duration parameter A (dimensionless)
    double period = 1.0;

    void validate() const {
        if (!(eps_p >= 0.0) || !std::isfinite(eps_p))
            throw InvalidArgument("Gaussian eps_p must be finite and non-negative");
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("Gaussian A must be positive");
        if (!(period > 0.0) || !std::isfinite(period))
            throw InvalidArgument("Gaussian period T must be positive");
    }
};

/// Linear rise over t_r, flat top for t_w, linear fall over t_f, then zero
/// until the end of the period.
struct RectTrain {
    double eps_m = 0.0;
    double t_r = 0.1;
    double t_w = 0.0;
    double t_f = 0.1;
    double period = 1.0;

    double t2() const noexcept { return t_r + t_w; }
    double t3() const noexcept { return t_r + t_w + t_f; }

    void validate() const {
        if (!(eps_m >= 0.0) || !std::isfinite(eps_m))
            throw InvalidArgument("rectangular eps_m must be finite and non-negative");
        if (!(t_r > 0.0)) throw InvalidArgument("rectangular t_r must be positive");
        if (!(t_w >= 0.0)) throw InvalidArgument("rectangular t_w must be non-negative");
        if (!(t_f > 0.0)) throw InvalidArgument("rectangular t_f must be positive");
        if (!(period > 0.0) || !std::isfinite(period))
            throw InvalidArgument("rectangular period T must be positive");
        if (t3() > period)
            throw InvalidArgument("rectangular pulse does not fit in its period: t_r + t_w + t_f = " +
                                  std::to_string(t3()) + " > T = " + std::to_string(period));
    }
};

using PulseSpec = std::variant<GaussianTrain, RectTrain>;

inline void validate(const PulseSpec& pulse) {
    std::visit([](const auto& p) { p.validate(); }, pulse);
}

inline double period(const PulseSpec& pulse) {
    return std::visit([](const auto& p) { return p.period; }, pulse);
}

inline bool is_gaussian(const PulseSpec& pulse) {
    return std::holds_alternative<GaussianTrain>(pulse);
}

/// t mod T with a non-negative remainder.
inline double wrap_time(double t, double period) {
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

inline double gaussian_envelope(const GaussianTrain& p, double t, double gamma = 1.0) {
    if (p.eps_p == 0.0) return 0.0;
    const double s = p.a * gamma;
    const double T = p.period;
    const double tp = wrap_time(t, T);
    if (s * T >= 2.5) {
        // Narrow pulses: direct sum over the pulses within 8/(A gamma).
        const double reach = 8.0 / s;
        const long m_lo = static_cast<long>(std::ceil((tp - reach) / T));
        const long m_hi = static_cast<long>(std::floor((tp + reach) / T));
        double sum = 0.0;
        for (long m = m_lo; m <= m_hi; ++m) {
            const double x = s * (tp - static_cast<double>(m) * T);
            sum += std::exp(-x * x);
        }
        return p.eps_p * p.a / std::sqrt(std::numbers::pi) * sum;
    }
    // Wide pulses overlap heavily; the Poisson-summed (Fourier) form of the
    // same train converges in a handful of harmonics instead.
    const double omega = 2.0 * std::numbers::pi / T;
    double sum = 1.0;
    for (long k = 1;; ++k) {
        const double x = static_cast<double>(k) * omega / (2.0 * s);
        if (x * x > 64.0) break;
        sum += 2.0 * std::exp(-x * x) * std::cos(static_cast<double>(k) * omega * tp);
    }
    return p.eps_p / (gamma * T) * sum;
}

inline double rect_envelope(const RectTrain& p, double t) {
    const double tp = wrap_time(t, p.period);
    if (tp < p.t_r) return p.eps_m * tp / p.t_r;
    if (tp < p.t2()) return p.eps_m;
    if (tp < p.t3()) return p.eps_m * (p.t3() - tp) / p.t_f;
    return 0.0;
}

inline double envelope(const PulseSpec& pulse, double t, double gamma = 1.0) {
    return std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GaussianTrain>)
                return gaussian_envelope(p, t, gamma);
            else
                return rect_envelope(p, t);
        },
        pulse);
}

/// Instants in [t0, t1] where the envelope has a kink (rectangular corners)
/// or a pulse peak (Gaussian centres). An integrator stopping on these cannot
/// step over a pulse.
inline std::vector<double> breakpoints(const PulseSpec& pulse, double t0, double t1) {
    std::vector<double> out;
    const double T = period(pulse);
    std::vector<double> offsets;
    if (const auto* r = std::get_if<RectTrain>(&pulse))
        offsets = {0.0, r->t_r, r->t2(), r->t3()};
    else
        offsets = {0.0};
    const long m0 = static_cast<long>(std::floor(t0 / T));
    const long m1 = static_cast<long>(std::ceil(t1 / T));
    for (long m = m0; m <= m1; ++m)
        for (double o : offsets) {
            const double s = static_cast<double>(m) * T + o;
            if (s >= t0 && s <= t1) out.push_back(s);
        }
    return out;
}

/// Truncated series eps(t) ~ sum_{k=-K}^{K} eps_k exp(i k omega_p t).
struct FourierSeries {
    double omega_p = 0.0;
    int k_max = 0;
    std::vector<std::complex<double>> coeffs;  ///< index k + k_max

    std::complex<double> coeff(int k) const {
        if (k < -k_max || k > k_max) return {0.0, 0.0};
        return coeffs[static_cast<std::size_t>(k + k_max)];
    }
};

inline int default_k_max(const PulseSpec& pulse) { return is_gaussian(pulse) ? 50 : 400; }

inline constexpr double kFourierAbsTol = 1e-10;

namespace detail {

using FourierQuad = boost::math::quadrature::gauss_kronrod<double, 31>;

/// Gauss-Kronrod on [a, b], bisecting while the Kronrod-Gauss difference
/// exceeds abs_tol. Accumulates the error estimate into err.
template <class F>
std::complex<double> integrate_panel(const F& f, double a, double b, double abs_tol, int depth, double& err) {
    double e = 0.0;
    const std::complex<double> v = FourierQuad::integrate(f, a, b, 0, 0.0, &e);
    if (e <= abs_tol || depth == 0) {
        err += e;
        return v;
    }
    const double mid = 0.5 * (a + b);
    return integrate_panel(f, a, mid, abs_tol / 2, depth - 1, err) +
           integrate_panel(f, mid, b, abs_tol / 2, depth - 1, err);
}

}  // namespace detail

/// eps_k = (1/T) int_0^T eps(t) exp(-i k omega_p t) dt by Gauss-Kronrod on
/// panels split at the envelope's corners and subdivided to resolve both the
/// harmonic and the pulse width. Negative k follow from the reality of the
/// envelope.
inline FourierSeries fourier_coeffs(const PulseSpec& pulse, int k_max, double gamma = 1.0) {
    if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
    validate(pulse);
    const double T = period(pulse);
    FourierSeries fs;
    fs.omega_p = 2.0 * std::numbers::pi / T;
    fs.k_max = k_max;
    fs.coeffs.assign(static_cast<std::size_t>(2 * k_max + 1), {0.0, 0.0});

    std::vector<double> panels;
    double width = T;  // feature scale of the envelope itself
    if (const auto* r = std::get_if<RectTrain>(&pulse)) {
        if (r->eps_m == 0.0) return fs;
        panels = {0.0, r->t_r, r->t2(), r->t3()};
    } else {
        const auto& g = std::get<GaussianTrain>(pulse);
        if (g.eps_p == 0.0) return fs;
        panels = {0.0, T / 2.0, T};
        width = 2.0 / (g.a * gamma);
    }

    for (int k = 0; k <= k_max; ++k) {
        const double w = static_cast<double>(k) * fs.omega_p;
        const double h_max = std::min(width, k > 0 ? 6.0 / w : T);
        auto f = [&](double t) { return envelope(pulse, t, gamma) * std::exp(std::complex<double>(0.0, -w * t)); };
        std::complex<double> sum{0.0, 0.0};
        double err_total = 0.0;
        for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
            const double lo = panels[i], hi = panels[i + 1];
            if (!(hi > lo)) continue;
            const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h_max)));
            const double h = (hi - lo) / n;
            for (int j = 0; j < n; ++j) {
                const double a = lo + j * h, b = (j + 1 == n) ? hi : lo + (j + 1) * h;
                sum += detail::integrate_panel(f, a, b, 0.1 * kFourierAbsTol * (b - a), 12, err_total);
            }
        }
        if (!(err_total / T <= kFourierAbsTol))
            throw QuadratureError("Fourier coefficient k = " + std::to_string(k) +
                                  " did not converge (error estimate " + std::to_string(err_total / T) + ")");
        const std::complex<double> c = sum / T;
        fs.coeffs[static_cast<std::size_t>(k_max + k)] = c;
        fs.coeffs[static_cast<std::size_t>(k_max - k)] = std::conj(c);
    }
    return fs;
}

inline double reconstruct(const FourierSeries& series, double t) {
    std::complex<double> sum{0.0, 0.0};
    for (int k = -series.k_max; k <= series.k_max; ++k)
        sum += series.coeff(k) * std::exp(std::complex<double>(0.0, k * series.omega_p * t));
    if (std::abs(sum.imag()) > 1e-6)
        throw SymmetryError("reconstructed envelope has imaginary part " + std::to_string(sum.imag()));
    return sum.real();
}

}  // namespace blockade
