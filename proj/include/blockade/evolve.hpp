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

// Master-equation time evolution from the vacuum, sampled observables, and
// minima of photon statistics located between output samples.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blockade/dopri5.hpp"
#include "blockade/fock.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    /// Hermiticity and trace are checked at every output sample when set.
    bool check_invariants = true;
    /// Also diagonalise rho at every output sample (positivity check).
    bool check_positivity = true;
};

struct EvolveOptions {
    double t_end = 0.0;  ///< <= 0 selects default_t_end(pulse)
    double dt_out = 0.01;
    double n_floor = kDefaultPhotonFloor;
    IntegratorOptions integrator;
    bool keep_states = false;
    bool record_trajectory = true;
    /// Start of the window over which minima are tracked, as a fraction of t_end.
    double window_start_frac = 0.5;
};

/// max(10 T, 30 / gamma): long enough for the periodic regime to settle.
inline double default_t_end(const PulseSpec& pulse, double gamma = 1.0) {
    return std::max(10.0 * period(pulse), 30.0 / gamma);
}

struct Trajectory {
    std::vector<double> times;
    std::vector<double> drive;
    std::vector<double> n;
    std::vector<std::optional<double>> g2;
    std::vector<double> p0, p1, p2;
    std::vector<ComplexMatrix> states;  ///< filled only with keep_states

    std::size_t size() const noexcept { return times.size(); }
};

/// Smallest value of an observable over the window, refined between samples.
struct WindowMinimum {
    double value = std::numeric_limits<double>::infinity();
    double time = std::numeric_limits<double>::quiet_NaN();

    bool found() const noexcept { return std::isfinite(value); }

    void offer(double t, double v) {
        if (v < value) {
            value = v;
            time = t;
        }
    }
};

struct WindowMinima {
    double window_start = 0.0;
    WindowMinimum n;
    WindowMinimum g2;
    WindowMinimum p1;
    WindowMinimum p2;
};

struct Evolution {
    Trajectory trajectory;
    WindowMinima minima;
    double t_end = 0.0;
    Dopri5Stats stats;
};

namespace detail {

/// An observable of the Fock populations; +inf marks "undefined here".
using PopulationFunctional = std::function<double(const Eigen::VectorXd&)>;

inline Eigen::VectorXd populations_at(const DenseStep<ComplexMatrix>& step, double t) {
    const double h = step.t1 - step.t0;
    const double theta = h > 0.0 ? (t - step.t0) / h : 1.0;
    const double s1 = 1.0 - theta;
    return (step.r1.diagonal() +
            theta * (step.r2.diagonal() +
                     s1 * (step.r3.diagonal() + theta * (step.r4.diagonal() + s1 * step.r5.diagonal()))))
        .real();
}

/// Samples f on a sub-grid of [lo, hi] and polishes the best sample with a
/// golden-section search on the step's continuous extension.
inline void refine_minimum(const DenseStep<ComplexMatrix>& step, double lo, double hi,
                           const PopulationFunctional& f, WindowMinimum& out) {
    constexpr int kSub = 8;
    double vals[kSub + 1];
    int best = 0;
    for (int j = 0; j <= kSub; ++j) {
        const double t = lo + (hi - lo) * j / kSub;
        vals[j] = f(populations_at(step, t));
        out.offer(t, vals[j]);
        if (vals[j] < vals[best]) best = j;
    }
    if (!std::isfinite(vals[best]) || hi <= lo) return;
    double a = lo + (hi - lo) * std::max(best - 1, 0) / kSub;
    double b = lo + (hi - lo) * std::min(best + 1, kSub) / kSub;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = f(populations_at(step, x1)), f2 = f(populations_at(step, x2));
    const double tol = 1e-11 * (1.0 + std::abs(b));
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(populations_at(step, x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(populations_at(step, x2));
        }
    }
    out.offer(x1, f1);
    out.offer(x2, f2);
}

}  // namespace detail

/// Integrates the master equation from the vacuum under the pulse train.
/// The envelope is evaluated at every stage time, and steps stop on the
/// pulse breakpoints. Observables are sampled every dt_out. Minima of n, g2,
/// P1 and P2 over t >= window_start_frac * t_end are located to integrator
/// accuracy rather than output-grid accuracy.
inline Evolution simulate(const SystemParams& p, const PulseSpec& pulse, const EvolveOptions& opts = {}) {
    p.validate();
    validate(pulse);
    if (!(opts.dt_out > 0.0)) throw InvalidArgument("dt_out must be positive");
    if (!(opts.n_floor > 0.0)) throw InvalidArgument("n_floor must be positive");
    if (!(opts.window_start_frac >= 0.0 && opts.window_start_frac < 1.0))
        throw InvalidArgument("window_start_frac must lie in [0, 1)");

    Evolution ev;
    ev.t_end = opts.t_end > 0.0 ? opts.t_end : default_t_end(pulse, p.gamma);
    const double t_end = ev.t_end;
    const double w0 = opts.window_start_frac * t_end;
    ev.minima.window_start = w0;

    const KerrLindbladian lindblad(p);
    auto rhs = [&](double t, const ComplexMatrix& rho, ComplexMatrix& out) {
        lindblad.apply(envelope(pulse, t, p.gamma), rho, out);
    };

    const double n_floor = opts.n_floor;
    const detail::PopulationFunctional f_n = [](const Eigen::VectorXd& pop) {
        double n = 0.0;
        for (Eigen::Index k = 1; k < pop.size(); ++k) n += static_cast<double>(k) * pop[k];
        return n;
    };
    const detail::PopulationFunctional f_g2 = [n_floor](const Eigen::VectorXd& pop) {
        double n = 0.0, m2 = 0.0;
        for (Eigen::Index k = 1; k < pop.size(); ++k) {
            n += static_cast<double>(k) * pop[k];
            m2 += static_cast<double>(k) * static_cast<double>(k - 1) * pop[k];
        }
        if (n < n_floor) return std::numeric_limits<double>::infinity();
        return m2 / (n * n);
    };
    const detail::PopulationFunctional f_p1 = [](const Eigen::VectorXd& pop) { return pop[1]; };
    const detail::PopulationFunctional f_p2 = [](const Eigen::VectorXd& pop) { return pop[2]; };

    const auto n_samples = static_cast<std::size_t>(std::floor(t_end / opts.dt_out + 1e-9)) + 1;
    Trajectory& tr = ev.trajectory;
    if (opts.record_trajectory) {
        tr.times.reserve(n_samples);
        tr.drive.reserve(n_samples);
        tr.n.reserve(n_samples);
        tr.g2.reserve(n_samples);
        tr.p0.reserve(n_samples);
        tr.p1.reserve(n_samples);
        tr.p2.reserve(n_samples);
    }
    std::size_t next = 0;
    ComplexMatrix rho_s;

    auto record = [&](double t, const ComplexMatrix& rho) {
        if (opts.integrator.check_invariants) check_density(rho, t, opts.integrator.check_positivity);
        const double n = mean_photon(rho);
        const auto g = g2(rho, n_floor);
        if (opts.record_trajectory) {
            tr.times.push_back(t);
            tr.drive.push_back(envelope(pulse, t, p.gamma));
            tr.n.push_back(n);
            tr.g2.push_back(g);
            tr.p0.push_back(rho(0, 0).real());
            tr.p1.push_back(rho(1, 1).real());
            tr.p2.push_back(rho(2, 2).real());
            if (opts.keep_states) tr.states.push_back(rho);
        }
        if (t >= w0) {
            ev.minima.n.offer(t, n);
            if (g) ev.minima.g2.offer(t, *g);
            ev.minima.p1.offer(t, rho(1, 1).real());
            ev.minima.p2.offer(t, rho(2, 2).real());
        }
    };

    auto observer = [&](const DenseStep<ComplexMatrix>& step) {
        while (next < n_samples) {
            const double ts = static_cast<double>(next) * opts.dt_out;
            if (ts > step.t1 + 1e-12 * (1.0 + step.t1)) break;
            step.eval(std::min(ts, step.t1), rho_s);
            record(ts, rho_s);
            ++next;
        }
        if (step.t1 > w0) {
            const double lo = std::max(step.t0, w0);
            detail::refine_minimum(step, lo, step.t1, f_n, ev.minima.n);
            detail::refine_minimum(step, lo, step.t1, f_g2, ev.minima.g2);
            detail::refine_minimum(step, lo, step.t1, f_p1, ev.minima.p1);
            detail::refine_minimum(step, lo, step.t1, f_p2, ev.minima.p2);
        }
    };

    Dopri5Options dopts;
    dopts.rtol = opts.integrator.rtol;
    dopts.atol = opts.integrator.atol;
    dopts.h_max = opts.integrator.h_max;
    Dopri5<ComplexMatrix> integrator(dopts);
    const auto stops = breakpoints(pulse, 0.0, t_end);
    integrator.integrate(rhs, vacuum_state(p.fock_dim), 0.0, t_end, stops, observer);
    ev.stats = integrator.stats();
    return ev;
}

inline Trajectory evolve(const SystemParams& p, const PulseSpec& pulse, const EvolveOptions& opts = {}) {
    return simulate(p, pulse, opts).trajectory;
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// CSV with header t,eps,n,g2,P0,P1,P2; an undefined g2 is an empty field.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,eps,n,g2,P0,P1,P2\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        os << format_number(tr.times[i]) << ',' << format_number(tr.drive[i]) << ','
           << format_number(tr.n[i]) << ',';
        if (tr.g2[i]) os << format_number(*tr.g2[i]);
        os << ',' << format_number(tr.p0[i]) << ',' << format_number(tr.p1[i]) << ','
           << format_number(tr.p2[i]) << '\n';
    }
}

}  // namespace blockade
