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

// Adaptive Dormand-Prince 5(4) integrator with the 4th-order continuous
// extension, for any fixed-size or dynamic Eigen state (real or complex).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "blockade/errors.hpp"

namespace blockade {

struct Dopri5Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_init = 0.0;  ///< 0 selects the starting step automatically
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 10'000'000;
};

struct Dopri5Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

/// Continuous extension over one accepted step [t0, t1].
template <class State>
struct DenseStep {
    double t0 = 0.0;
    double t1 = 0.0;
    State r1, r2, r3, r4, r5;

    void eval(double t, State& out) const {
        const double h = t1 - t0;
        const double theta = h > 0.0 ? (t - t0) / h : 1.0;
        const double s1 = 1.0 - theta;
        out = r1 + theta * (r2 + s1 * (r3 + theta * (r4 + s1 * r5)));
    }

    State eval(double t) const {
        State out;
        eval(t, out);
        return out;
    }
};

namespace detail::dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace detail::dp5

/// Integrates y' = f(t, y) over [t0, t1]. `rhs(t, y, dydt)` writes into dydt.
/// Steps land exactly on every entry of `stops` inside (t0, t1), so kinks in a
/// driving term never fall inside a step. `observer(const DenseStep&)` is
/// called after each accepted step. The error norm is the max over components,
/// so components that stay negligible never influence the step sequence.
template <class State>
class Dopri5 {
public:
    explicit Dopri5(Dopri5Options opts = {}) : opts_(opts) {
        if (!(opts_.rtol > 0.0) || !(opts_.atol > 0.0))
            throw InvalidArgument("integrator tolerances must be positive");
    }

    const Dopri5Stats& stats() const noexcept { return stats_; }

    template <class Rhs, class Observer>
    State integrate(Rhs&& rhs, const State& y0, double t0, double t1, std::span<const double> stops,
                    Observer&& observer) {
        using namespace detail::dp5;
        if (!(t1 > t0)) throw InvalidArgument("integration interval must have t1 > t0");

        std::vector<double> ends;
        for (double s : stops)
            if (s > t0 && s < t1) ends.push_back(s);
        std::sort(ends.begin(), ends.end());
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        ends.push_back(t1);

        State y = y0;
        double t = t0;
        k1_ = y;
        rhs(t, y, k1_);
        ++stats_.rhs_evals;
        double h = opts_.h_init > 0.0 ? opts_.h_init : initial_step(rhs, t, y, ends.front() - t);
        bool reject_prev = false;

        for (std::size_t seg = 0; seg < ends.size(); ++seg) {
            const double te = ends[seg];
            if (seg > 0) {
                rhs(t, y, k1_);
                ++stats_.rhs_evals;
            }
            while (t < te) {
                if (stats_.accepted + stats_.rejected >= opts_.max_steps)
                    throw IntegrationError("maximum number of steps exceeded", t);
                h = std::min(h, opts_.h_max);
                bool last = false;
                if (t + 1.0001 * h >= te) {
                    h = te - t;
                    last = true;
                }
                if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
                    throw IntegrationError("step size underflow", t);

                tmp_ = y + h * a21 * k1_;
                rhs(t + c2 * h, tmp_, k2_);
                tmp_ = y + h * (a31 * k1_ + a32 * k2_);
                rhs(t + c3 * h, tmp_, k3_);
                tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
                rhs(t + c4 * h, tmp_, k4_);
                tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
                rhs(t + c5 * h, tmp_, k5_);
                tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
                const double t_new = last ? te : t + h;
                rhs(t_new, tmp_, k6_);
                y_new_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
                rhs(t_new, y_new_, k7_);
                stats_.rhs_evals += 6;

                err_vec_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
                const double err = error_norm(err_vec_, y, y_new_);
                if (!std::isfinite(err)) throw IntegrationError("non-finite error estimate", t);

                if (err <= 1.0) {
                    ++stats_.accepted;
                    dense_.t0 = t;
                    dense_.t1 = t_new;
                    dense_.r1 = y;
                    dense_.r2 = y_new_ - y;
                    dense_.r3 = h * k1_ - dense_.r2;
                    dense_.r4 = dense_.r2 - h * k7_ - dense_.r3;
                    dense_.r5 = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
                    observer(static_cast<const DenseStep<State>&>(dense_));

                    const double h_used = h;
                    y = y_new_;
                    k1_ = k7_;
                    t = t_new;
                    double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 10.0;
                    fac = std::clamp(fac, 0.2, reject_prev ? 1.0 : 10.0);
                    // A step shortened to hit a stop says nothing about the
                    // natural step size; keep the previous proposal.
                    if (last) {
                        h = std::max(h_used * fac, h_prev_);
                    } else {
                        h = h_used * fac;
                        h_prev_ = h;
                    }
                    reject_prev = false;
                } else {
                    ++stats_.rejected;
                    h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                    reject_prev = true;
                }
            }
        }
        return y;
    }

    template <class Rhs>
    State integrate(Rhs&& rhs, const State& y0, double t0, double t1) {
        return integrate(std::forward<Rhs>(rhs), y0, t0, t1, std::span<const double>{},
                         [](const DenseStep<State>&) {});
    }

private:
    double error_norm(const State& e, const State& y, const State& y_new) const {
        return (e.cwiseAbs().array() /
                (opts_.atol + opts_.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()))
            .maxCoeff();
    }

    template <class Rhs>
    double initial_step(Rhs& rhs, double t, const State& y, double span) {
        auto scaled = [&](const State& v) {
            return (v.cwiseAbs().array() / (opts_.atol + opts_.rtol * y.cwiseAbs().array())).maxCoeff();
        };
        const double d0 = scaled(y);
        const double d1 = scaled(k1_);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, opts_.h_max, span});
        tmp_ = y + h0 * k1_;
        rhs(t + h0, tmp_, k2_);
        ++stats_.rhs_evals;
        const double d2 = scaled(State(k2_ - k1_)) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h_prev_ = std::min({100.0 * h0, h1, opts_.h_max});
        return h_prev_;
    }

    Dopri5Options opts_;
    Dopri5Stats stats_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_vec_;
    DenseStep<State> dense_;
    double h_prev_ = 0.0;
};

}  // namespace blockade
