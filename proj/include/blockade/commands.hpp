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

// The four run commands behind the CLI. Each writes its artifacts into an
// output directory together with result.json, which echoes the configuration,
// seed and version needed to replay the run.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blockade/analytic.hpp"
#include "blockade/config.hpp"
#include "blockade/evolve.hpp"
#include "blockade/fitness.hpp"
#include "blockade/pso.hpp"
#include "blockade/svg.hpp"

#ifndef BLOCKADE_VERSION
#define BLOCKADE_VERSION "0.0.0"
#endif

namespace blockade {

inline constexpr const char* kVersion = BLOCKADE_VERSION;

struct CommandOptions {
    std::filesystem::path out_dir = "out";
    bool svg = false;
    std::optional<std::uint64_t> seed;  ///< overrides pso.seed
    std::ostream* warnings = &std::cerr;
};

namespace detail::cmd {

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline std::string exact(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write " + p.string());
    return os;
}

inline void write_json(const std::filesystem::path& p, const Json& j) {
    auto os = open(p);
    os << j.dump(2) << '\n';
}

inline Json minima_json(const Evolution& ev) {
    const auto& m = ev.minima;
    return {
        {"t_end", ev.t_end},
        {"window_start", m.window_start},
        {"n_min", finite_or_null(m.n.value)},
        {"t_n_min", finite_or_null(m.n.time)},
        {"g2_min", finite_or_null(m.g2.value)},
        {"t_g2_min", finite_or_null(m.g2.time)},
        {"P1_min", finite_or_null(m.p1.value)},
        {"P2_min", finite_or_null(m.p2.value)},
        {"samples", ev.trajectory.size()},
        {"steps_accepted", ev.stats.accepted},
        {"steps_rejected", ev.stats.rejected},
    };
}

inline void trajectory_svg(const std::filesystem::path& dir, const Trajectory& tr) {
    std::vector<double> g2(tr.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.g2[i]) g2[i] = *tr.g2[i];
    svg::write_line_plot((dir / "trajectory_drive.svg").string(), tr.times, {{"eps(t)", tr.drive}},
                         {"Drive envelope", "gamma t", "eps / gamma"});
    svg::write_line_plot((dir / "trajectory_n.svg").string(), tr.times, {{"n(t)", tr.n}},
                         {"Mean photon number", "gamma t", "n", true});
    svg::write_line_plot((dir / "trajectory_g2.svg").string(), tr.times, {{"g2(t)", g2}},
                         {"Second-order correlation", "gamma t", "g2", true});
    svg::write_line_plot((dir / "trajectory_populations.svg").string(), tr.times,
                         {{"P1", tr.p1}, {"P2", tr.p2, "#d62728"}}, {"Fock populations", "gamma t", "P", true});
}

inline Json run_header(const std::string& command, const RunConfig& cfg, double wall) {
    return {{"command", command},
            {"version", kVersion},
            {"seed", cfg.pso.seed},
            {"wall_time_s", wall},
            {"config", config_to_json(cfg)}};
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail::cmd

struct SimulateOutcome {
    Evolution evolution;
    Json summary;
};

/// trajectory.csv (t,eps,n,g2,P0,P1,P2) and summary.json with the windowed minima.
inline SimulateOutcome cmd_simulate(RunConfig cfg, const CommandOptions& opt) {
    using namespace detail::cmd;
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.seed) cfg.pso.seed = *opt.seed;
    std::filesystem::create_directories(opt.out_dir);
    SimulateOutcome out;
    out.evolution = simulate(cfg.system, cfg.pulse, evolve_options(cfg));
    {
        auto os = open(opt.out_dir / "trajectory.csv");
        write_trajectory_csv(os, out.evolution.trajectory);
    }
    out.summary = minima_json(out.evolution);
    write_json(opt.out_dir / "summary.json", out.summary);
    auto result = run_header("simulate", cfg, seconds_since(t0));
    result["summary"] = out.summary;
    write_json(opt.out_dir / "result.json", result);
    if (opt.svg) trajectory_svg(opt.out_dir, out.evolution.trajectory);
    return out;
}

struct OptimizeOutcome {
    pso::Result result;
    Json run_result;
};

/// Swarm search over the configured pulse family. Writes history.csv
/// (iter,best_fit), result.json, fitness_log.jsonl, and the trajectory and
/// summary at the best parameters found.
inline OptimizeOutcome cmd_optimize(RunConfig cfg, const CommandOptions& opt) {
    using namespace detail::cmd;
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.seed) cfg.pso.seed = *opt.seed;
    std::filesystem::create_directories(opt.out_dir);

    auto log = open(opt.out_dir / "fitness_log.jsonl");
    auto spec = fitness_spec(cfg);
    spec.log = &log;
    const auto bounds = bounds_for(cfg);
    OptimizeOutcome out;
    out.result = pso::optimize(bounds, cfg.pso, [&](std::span<const double> x) { return evaluate_g2min(x, spec); });
    log.close();

    {
        auto os = open(opt.out_dir / "history.csv");
        os << "iter,best_fit\n";
        for (std::size_t k = 0; k < out.result.history.size(); ++k)
            os << k << ',' << exact(out.result.history[k]) << '\n';
    }

    const auto& names = parameter_names(spec.family);
    Json best = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) best[names[i]] = out.result.best_pos[i];

    // Follow-up run at the optimum, on the default horizon for its period.
    auto [sys, pulse] = decode(out.result.best_pos, spec);
    RunConfig at_best = cfg;
    at_best.system = sys;
    at_best.pulse = pulse;
    at_best.sim.t_end = 0.0;
    const auto ev = simulate(sys, pulse, evolve_options(at_best));
    {
        auto os = open(opt.out_dir / "trajectory.csv");
        write_trajectory_csv(os, ev.trajectory);
    }
    const auto summary = minima_json(ev);
    write_json(opt.out_dir / "summary.json", summary);

    out.run_result = run_header("optimize", cfg, seconds_since(t0));
    out.run_result["family"] = to_string(spec.family);
    out.run_result["best_parameters"] = best;
    out.run_result["best_pulse"] = pulse_to_json(pulse);
    out.run_result["best_fitness"] = finite_or_null(out.result.best_fit);
    out.run_result["evaluations"] = out.result.evaluations;
    out.run_result["summary_at_best"] = summary;
    write_json(opt.out_dir / "result.json", out.run_result);

    if (opt.svg) {
        std::vector<double> iters(out.result.history.size());
        for (std::size_t k = 0; k < iters.size(); ++k) iters[k] = static_cast<double>(k);
        svg::write_line_plot((opt.out_dir / "history.svg").string(), iters, {{"best g2_min", out.result.history}},
                             {"Swarm convergence", "iteration", "best fitness", true});
        trajectory_svg(opt.out_dir, ev.trajectory);
    }
    return out;
}

struct SweepRequest {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    int points = 100;
};

/// One-parameter scan of g2_min around the configured pulse; sweep_<param>.csv.
inline std::vector<SweepPoint> cmd_sweep(RunConfig cfg, const SweepRequest& req, const CommandOptions& opt) {
    using namespace detail::cmd;
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.seed) cfg.pso.seed = *opt.seed;
    const auto spec = fitness_spec(cfg);
    parameter_index(spec.family, req.param);  // validates the name before any work
    std::filesystem::create_directories(opt.out_dir);
    const auto base = encode(cfg.system, cfg.pulse);
    const auto grid = linspace(req.min, req.max, req.points);
    const auto curve = sweep(base, req.param, grid, spec, cfg.pso.threads);

    const auto csv = opt.out_dir / ("sweep_" + req.param + ".csv");
    {
        auto os = open(csv);
        os << "param_value,g2_min\n";
        for (const auto& p : curve) os << exact(p.value) << ',' << exact(p.g2min) << '\n';
    }
    auto result = run_header("sweep", cfg, seconds_since(t0));
    result["param"] = req.param;
    result["min"] = req.min;
    result["max"] = req.max;
    result["points"] = req.points;
    write_json(opt.out_dir / "result.json", result);
    if (opt.svg) {
        std::vector<double> x, y;
        for (const auto& p : curve) {
            x.push_back(p.value);
            y.push_back(p.g2min);
        }
        svg::write_line_plot((opt.out_dir / ("sweep_" + req.param + ".svg")).string(), x, {{"g2_min", y}},
                             {"g2_min versus " + req.param, req.param, "g2_min", true});
    }
    return curve;
}

/// Minimum P1 for a sample to enter the relative-deviation statistics.
inline constexpr double kCompareP1Floor = 1e-6;

struct CompareOutcome {
    double max_rel_dev_p1 = 0.0;
    double max_rel_dev_p2 = 0.0;
    double t_max_dev_p1 = std::numeric_limits<double>::quiet_NaN();
    double t_max_dev_p2 = std::numeric_limits<double>::quiet_NaN();
    std::size_t compared = 0;
    bool weak_excitation_valid = true;
    std::vector<double> times, p1_num, p2_num, p1_ana, p2_ana;
    Json summary;
};

/// Master-equation populations against the weak-excitation Fourier solution
/// over the periodic window. compare.csv has t,P1_num,P2_num,P1_ana,P2_ana.
inline CompareOutcome cmd_analytic_compare(RunConfig cfg, const CommandOptions& opt) {
    using namespace detail::cmd;
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.seed) cfg.pso.seed = *opt.seed;
    std::filesystem::create_directories(opt.out_dir);
    const auto ev = simulate(cfg.system, cfg.pulse, evolve_options(cfg));
    const auto& tr = ev.trajectory;
    const double w0 = ev.minima.window_start;

    CompareOutcome out;
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.times[i] >= w0) {
            out.times.push_back(tr.times[i]);
            out.p1_num.push_back(tr.p1[i]);
            out.p2_num.push_back(tr.p2[i]);
        }
    const int k_max = cfg.k_max > 0 ? cfg.k_max : default_k_max(cfg.pulse);
    auto ana = analytic_populations(out.times, cfg.system, cfg.pulse, k_max);
    out.p1_ana = std::move(ana.p1);
    out.p2_ana = std::move(ana.p2);
    out.weak_excitation_valid = ana.weak_excitation_valid;
    if (!ana.weak_excitation_valid && opt.warnings) *opt.warnings << "warning: " << ana.warning << '\n';

    for (std::size_t i = 0; i < out.times.size(); ++i) {
        if (!(out.p1_num[i] > kCompareP1Floor)) continue;
        ++out.compared;
        const double d1 = std::abs(out.p1_ana[i] - out.p1_num[i]) / out.p1_num[i];
        if (d1 > out.max_rel_dev_p1) {
            out.max_rel_dev_p1 = d1;
            out.t_max_dev_p1 = out.times[i];
        }
        if (out.p2_num[i] > 0.0) {
            const double d2 = std::abs(out.p2_ana[i] - out.p2_num[i]) / out.p2_num[i];
            if (d2 > out.max_rel_dev_p2) {
                out.max_rel_dev_p2 = d2;
                out.t_max_dev_p2 = out.times[i];
            }
        }
    }

    {
        auto os = open(opt.out_dir / "compare.csv");
        os << "t,P1_num,P2_num,P1_ana,P2_ana\n";
        for (std::size_t i = 0; i < out.times.size(); ++i)
            os << format_number(out.times[i]) << ',' << format_number(out.p1_num[i]) << ','
               << format_number(out.p2_num[i]) << ',' << format_number(out.p1_ana[i]) << ','
               << format_number(out.p2_ana[i]) << '\n';
    }
    out.summary = {
        {"max_rel_dev_P1", out.max_rel_dev_p1},
        {"max_rel_dev_P2", out.max_rel_dev_p2},
        {"t_max_dev_P1", finite_or_null(out.t_max_dev_p1)},
        {"t_max_dev_P2", finite_or_null(out.t_max_dev_p2)},
        {"compared_samples", out.compared},
        {"P1_floor", kCompareP1Floor},
        {"window_start", w0},
        {"k_max", k_max},
        {"max_P1_analytic", ana.max_p1},
        {"weak_excitation_valid", ana.weak_excitation_valid},
        {"warning", ana.warning},
    };
    write_json(opt.out_dir / "compare_summary.json", out.summary);
    auto result = run_header("analytic-compare", cfg, seconds_since(t0));
    result["summary"] = out.summary;
    write_json(opt.out_dir / "result.json", result);
    if (opt.svg)
        svg::write_line_plot((opt.out_dir / "compare.svg").string(), out.times,
                             {{"P1 numerical", out.p1_num, "#d62728"},
                              {"P1 analytic", out.p1_ana, "#1f77b4"},
                              {"P2 numerical", out.p2_num, "#ff7f0e"},
                              {"P2 analytic", out.p2_ana, "#2ca02c"}},
                             {"Numerical versus analytic populations", "gamma t", "P", true});
    return out;
}

}  // namespace blockade
