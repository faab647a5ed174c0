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

// Blockade fitness: the minimum of g2(t) over the late-time window, as a
// function of the pulse parameter vector. Also the one-parameter sweeps.

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockade/evolve.hpp"
#include "blockade/pso.hpp"

namespace blockade {

enum class PulseFamily { gaussian, rect };

inline std::string to_string(PulseFamily f) { return f == PulseFamily::gaussian ? "gaussian" : "rect"; }

inline PulseFamily family_of(const PulseSpec& pulse) {
    return is_gaussian(pulse) ? PulseFamily::gaussian : PulseFamily::rect;
}

/// Coordinate names of the parameter vector, in order. All in gamma = 1 units.
inline const std::vector<std::string>& parameter_names(PulseFamily f) {
    static const std::vector<std::string> gaussian{"delta", "eps_p", "T", "A"};
    static const std::vector<std::string> rect{"delta", "eps_m", "t_r", "t_w", "t_f", "T"};
    return f == PulseFamily::gaussian ? gaussian : rect;
}

inline std::size_t parameter_index(PulseFamily f, const std::string& name) {
    const auto& names = parameter_names(f);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw InvalidArgument("unknown parameter '" + name + "' for " + to_string(f) +
                              " pulses; valid names: " + valid);
    }
    return static_cast<std::size_t>(it - names.begin());
}

/// Search ranges used for the optimisation runs.
inline pso::Bounds default_bounds(PulseFamily f) {
    if (f == PulseFamily::gaussian) return {{-5.0, 0.1, 3.0, 0.001}, {5.0, 0.5, 8.0, 10.0}};
    return {{-5.0, 0.1, 0.01, 0.01, 0.01, 3.0}, {5.0, 0.5, 0.5, 0.5, 0.5, 8.0}};
}

struct FitnessSpec {
    PulseFamily family = PulseFamily::gaussian;
    double u = 0.05;
    double gamma = 1.0;
    int fock_dim = 10;
    double window_start_frac = 0.5;
    double n_floor = kDefaultPhotonFloor;
    double dt_out = 0.01;
    /// Multiplies the default horizon max(10 T, 30 / gamma).
    double t_end_scale = 1.0;
    IntegratorOptions integrator{1e-8, 1e-14, std::numeric_limits<double>::infinity(), true, false};
    /// Receives one JSON line per evaluation when set.
    std::ostream* log = nullptr;
};

inline std::pair<SystemParams, PulseSpec> decode(std::span<const double> v, const FitnessSpec& spec) {
    const auto& names = parameter_names(spec.family);
    if (v.size() != names.size())
        throw InvalidArgument("parameter vector has " + std::to_string(v.size()) + " entries, expected " +
                              std::to_string(names.size()));
    SystemParams sys{v[0], spec.u, spec.gamma, spec.fock_dim};
    if (spec.family == PulseFamily::gaussian) return {sys, GaussianTrain{v[1], v[3], v[2]}};
    return {sys, RectTrain{v[1], v[2], v[3], v[4], v[5]}};
}

inline std::vector<double> encode(const SystemParams& sys, const PulseSpec& pulse) {
    if (const auto* g = std::get_if<GaussianTrain>(&pulse)) return {sys.delta, g->eps_p, g->period, g->a};
    const auto& r = std::get<RectTrain>(pulse);
    return {sys.delta, r.eps_m, r.t_r, r.t_w, r.t_f, r.period};
}

struct G2MinResult {
    double g2min = std::numeric_limits<double>::infinity();
    double t_at_min = std::numeric_limits<double>::quiet_NaN();
    double n_at_min = std::numeric_limits<double>::quiet_NaN();
    std::string error;  ///< non-empty when the evaluation failed
};

inline G2MinResult evaluate_g2min_detailed(std::span<const double> v, const FitnessSpec& spec) {
    G2MinResult res;
    try {
        const auto [sys, pulse] = decode(v, spec);
        EvolveOptions opts;
        opts.t_end = spec.t_end_scale * default_t_end(pulse, sys.gamma);
        opts.dt_out = spec.dt_out;
        opts.n_floor = spec.n_floor;
        opts.integrator = spec.integrator;
        opts.window_start_frac = spec.window_start_frac;
        opts.record_trajectory = false;
        const auto ev = simulate(sys, pulse, opts);
        res.g2min = ev.minima.g2.value;
        res.t_at_min = ev.minima.g2.time;
    } catch (const Error& e) {
        res.error = e.what();
    }

    if (spec.log) {
        nlohmann::json line;
        line["param_vector"] = std::vector<double>(v.begin(), v.end());
        line["g2min"] = std::isfinite(res.g2min) ? nlohmann::json(res.g2min) : nlohmann::json(nullptr);
        line["t_at_min"] = std::isfinite(res.t_at_min) ? nlohmann::json(res.t_at_min) : nlohmann::json(nullptr);
        if (!res.error.empty()) line["error"] = res.error;
        static std::mutex log_mutex;
        std::lock_guard lock(log_mutex);
        *spec.log << line.dump() << '\n';
    }
    return res;
}

/// g2_min over the window; +inf when no sample has n >= n_floor or the
/// integration fails, so the optimiser simply never selects such points.
inline double evaluate_g2min(std::span<const double> v, const FitnessSpec& spec) {
    return evaluate_g2min_detailed(v, spec).g2min;
}

struct SweepPoint {
    double value;
    double g2min;
};

inline std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw InvalidArgument("a sweep needs at least one point");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    return g;
}

/// g2_min with every coordinate of `base` fixed except `which`, which walks
/// the grid. Failed points come back as +inf.
inline std::vector<SweepPoint> sweep(std::span<const double> base, const std::string& which,
                                     std::span<const double> grid, const FitnessSpec& spec,
                                     unsigned threads = 1) {
    const std::size_t idx = parameter_index(spec.family, which);
    if (base.size() != parameter_names(spec.family).size())
        throw InvalidArgument("sweep base vector has the wrong length");
    Eigen::MatrixXd points(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(base.size()));
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < base.size(); ++j)
            points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = j == idx ? grid[i] : base[j];
    const auto fit = pso::evaluate_all(
        points, [&](std::span<const double> x) { return evaluate_g2min(x, spec); }, threads);
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.push_back({grid[i], fit[i]});
    return out;
}

/// Indices i with y[i-1] > y[i] < y[i+1].
inline std::vector<std::size_t> strict_local_minima(std::span<const double> y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) idx.push_back(i);
    return idx;
}

}  // namespace blockade
