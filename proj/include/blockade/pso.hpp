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

// Global-best particle swarm optimizer (minimisation). Deterministic for a
// given seed: all random draws and best-updates happen on the calling thread,
// in particle-major, dimension-minor order; only fitness evaluations run in
// parallel, and their results are merged by particle index.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "blockade/errors.hpp"

namespace blockade::pso {

struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const noexcept { return lo.size(); }

    void validate() const {
        if (lo.empty() || lo.size() != hi.size())
            throw InvalidArgument("bounds: lo and hi must be non-empty and of equal length");
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (!(lo[j] < hi[j]) || !std::isfinite(lo[j]) || !std::isfinite(hi[j]))
                throw InvalidArgument("bounds: need lo < hi in dimension " + std::to_string(j));
    }
};

struct Config {
    int n_particles = 20;
    int n_iters = 50;
    double w = 0.5;   ///< inertial weight
    double f1 = 1.5;  ///< cognitive factor
    double f2 = 1.5;  ///< social factor
    std::uint64_t seed = 0;
    double v_max_frac = 0.2;
    unsigned threads = 1;  ///< fitness evaluations in flight; 0 = hardware concurrency

    void validate() const {
        if (n_particles < 1) throw InvalidArgument("n_particles must be at least 1");
        if (n_iters < 0) throw InvalidArgument("n_iters must be non-negative");
        if (!(v_max_frac > 0.0 && v_max_frac <= 1.0)) throw InvalidArgument("v_max_frac must lie in (0, 1]");
        if (!std::isfinite(w) || !std::isfinite(f1) || !std::isfinite(f2))
            throw InvalidArgument("w, f1 and f2 must be finite");
    }
};

/// Uniform [0, 1) doubles from mt19937_64, converted by bit shifting so the
/// sequence is identical on every standard library.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed = 0) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool operator==(const UniformSource&) const = default;

private:
    std::mt19937_64 engine_;
};

struct Swarm {
    Eigen::MatrixXd positions;          ///< particles x dims
    Eigen::MatrixXd velocities;
    Eigen::MatrixXd personal_best_pos;
    Eigen::VectorXd personal_best_fit;
    Eigen::VectorXd global_best_pos;
    double global_best_fit = std::numeric_limits<double>::infinity();
    int iter = 0;
    std::size_t evaluations = 0;
    UniformSource rng;
};

using Fitness = std::function<double(std::span<const double>)>;

/// Fitness of every row of `positions`. Non-finite results become +inf.
inline std::vector<double> evaluate_all(const Eigen::MatrixXd& positions, const Fitness& fitness,
                                        unsigned threads) {
    const auto n = static_cast<std::size_t>(positions.rows());
    const auto d = static_cast<std::size_t>(positions.cols());
    std::vector<double> out(n, std::numeric_limits<double>::infinity());
    auto eval_one = [&](std::size_t i) {
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = positions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double f = fitness(std::span<const double>(x));
        out[i] = std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) eval_one(i);
        return out;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = cursor++; i < n; i = cursor++) eval_one(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace detail {
inline void update_bests(Swarm& s, const std::vector<double>& fit) {
    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        const double f = fit[static_cast<std::size_t>(i)];
        if (f < s.personal_best_fit[i]) {
            s.personal_best_fit[i] = f;
            s.personal_best_pos.row(i) = s.positions.row(i);
        }
    }
    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        if (s.personal_best_fit[i] < s.global_best_fit) {
            s.global_best_fit = s.personal_best_fit[i];
            s.global_best_pos = s.personal_best_pos.row(i).transpose();
        }
    }
}
}  // namespace detail

inline Swarm init_swarm(const Bounds& bounds, const Config& cfg, const Fitness& fitness) {
    bounds.validate();
    cfg.validate();
    const auto np = static_cast<Eigen::Index>(cfg.n_particles);
    const auto d = static_cast<Eigen::Index>(bounds.dim());
    Swarm s;
    s.rng = UniformSource(cfg.seed);
    s.positions.resize(np, d);
    for (Eigen::Index i = 0; i < np; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            s.positions(i, j) = bounds.lo[jj] + s.rng.next() * (bounds.hi[jj] - bounds.lo[jj]);
        }
    s.velocities = Eigen::MatrixXd::Zero(np, d);
    s.personal_best_pos = s.positions;
    s.personal_best_fit = Eigen::VectorXd::Constant(np, std::numeric_limits<double>::infinity());
    s.global_best_pos = s.positions.row(0).transpose();
    const auto fit = evaluate_all(s.positions, fitness, cfg.threads);
    s.evaluations += fit.size();
    detail::update_bests(s, fit);
    s.iter = 0;
    return s;
}

/// One synchronous update:
///   V <- w V + f1 r1 (P - X) + f2 r2 (G - X),  X <- X + V
/// with fresh r1, r2 per particle and dimension. V is clamped to
/// +-v_max_frac (hi - lo); a coordinate pushed outside the box is clamped onto
/// the boundary and its velocity zeroed.
inline void step(Swarm& s, const Bounds& bounds, const Config& cfg, const Fitness& fitness) {
    const Eigen::Index np = s.positions.rows();
    const Eigen::Index d = s.positions.cols();
    for (Eigen::Index i = 0; i < np; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double r1 = s.rng.next();
            const double r2 = s.rng.next();
            const double x = s.positions(i, j);
            double v = cfg.w * s.velocities(i, j) + cfg.f1 * r1 * (s.personal_best_pos(i, j) - x) +
                       cfg.f2 * r2 * (s.global_best_pos[j] - x);
            const double vmax = cfg.v_max_frac * (bounds.hi[jj] - bounds.lo[jj]);
            v = std::clamp(v, -vmax, vmax);
            double xn = x + v;
            if (xn < bounds.lo[jj]) {
                xn = bounds.lo[jj];
                v = 0.0;
            } else if (xn > bounds.hi[jj]) {
                xn = bounds.hi[jj];
                v = 0.0;
            }
            s.positions(i, j) = xn;
            s.velocities(i, j) = v;
        }
    const auto fit = evaluate_all(s.positions, fitness, cfg.threads);
    s.evaluations += fit.size();
    detail::update_bests(s, fit);
    ++s.iter;
}

struct Result {
    std::vector<double> best_pos;
    double best_fit = std::numeric_limits<double>::infinity();
    std::vector<double> history;  ///< global best after init and after each step
    std::size_t evaluations = 0;
};

/// Runs init_swarm and then n_iters steps; no early stopping. `on_iteration`
/// (optional) sees the swarm after init and after each step.
inline Result optimize(const Bounds& bounds, const Config& cfg, const Fitness& fitness,
                       const std::function<void(const Swarm&)>& on_iteration = {}) {
    Swarm s = init_swarm(bounds, cfg, fitness);
    Result r;
    r.history.reserve(static_cast<std::size_t>(cfg.n_iters) + 1);
    r.history.push_back(s.global_best_fit);
    if (on_iteration) on_iteration(s);
    for (int k = 0; k < cfg.n_iters; ++k) {
        step(s, bounds, cfg, fitness);
        r.history.push_back(s.global_best_fit);
        if (on_iteration) on_iteration(s);
    }
    r.best_pos.assign(s.global_best_pos.data(), s.global_best_pos.data() + s.global_best_pos.size());
    r.best_fit = s.global_best_fit;
    r.evaluations = s.evaluations;
    return r;
}

}  // namespace blockade::pso
