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

// Run configuration: a JSON document with a strict schema. Unknown keys and
// wrongly typed values are rejected with the dotted path of the offending key.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "blockade/errors.hpp"
#include "blockade/evolve.hpp"
#include "blockade/fitness.hpp"
#include "blockade/pso.hpp"
#include "blockade/pulse.hpp"

namespace blockade {

using Json = nlohmann::json;

struct SimSettings {
    double t_end = 0.0;  ///< 0 selects max(10 T, 30 / gamma)
    double dt_out = 0.01;
    double rtol = 1e-8;
    double atol = 1e-14;
};

struct RunConfig {
    SystemParams system;
    PulseSpec pulse = GaussianTrain{};
    SimSettings sim;
    pso::Config pso;
    /// Named search ranges; missing names fall back to default_bounds().
    std::map<std::string, std::pair<double, double>> bounds;
    double window_start_frac = 0.5;
    double n_floor = kDefaultPhotonFloor;
    int k_max = 0;  ///< 0 selects default_k_max(pulse)
    std::string output_dir = "out";
};

namespace detail::cfg {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) throw SchemaError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
}

inline double number(const Json& obj, const std::string& where, const char* key, double fallback, bool required = false) {
    const std::string path = where + "." + key;
    if (!obj.contains(key)) {
        if (required) throw SchemaError("missing required key '" + path + "'");
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) throw SchemaError("key '" + path + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError("key '" + path + "' must be finite");
    return x;
}

inline std::int64_t integer(const Json& obj, const std::string& where, const char* key, std::int64_t fallback) {
    const std::string path = where + "." + key;
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw SchemaError("key '" + path + "' must be an integer");
    return v.get<std::int64_t>();
}

}  // namespace detail::cfg

inline PulseSpec pulse_from_json(const Json& j, const std::string& where = "pulse") {
    using namespace detail::cfg;
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    if (!j.contains("type") || !j.at("type").is_string())
        throw SchemaError("missing required key '" + where + ".type'");
    const auto type = j.at("type").get<std::string>();
    PulseSpec pulse;
    if (type == "gaussian") {
        reject_unknown(j, where, {"type", "eps_p", "A", "T"});
        pulse = GaussianTrain{number(j, where, "eps_p", 0, true), number(j, where, "A", 0, true),
                              number(j, where, "T", 0, true)};
    } else if (type == "rect") {
        reject_unknown(j, where, {"type", "eps_m", "t_r", "t_w", "t_f", "T"});
        pulse = RectTrain{number(j, where, "eps_m", 0, true), number(j, where, "t_r", 0, true),
                          number(j, where, "t_w", 0, true), number(j, where, "t_f", 0, true),
                          number(j, where, "T", 0, true)};
    } else {
        throw SchemaError("key '" + where + ".type' must be \"gaussian\" or \"rect\", got \"" + type + "\"");
    }
    try {
        validate(pulse);
    } catch (const InvalidArgument& e) {
        throw SchemaError(where + ": " + e.what());
    }
    return pulse;
}

inline Json pulse_to_json(const PulseSpec& pulse) {
    if (const auto* g = std::get_if<GaussianTrain>(&pulse))
        return {{"type", "gaussian"}, {"eps_p", g->eps_p}, {"A", g->a}, {"T", g->period}};
    const auto& r = std::get<RectTrain>(pulse);
    return {{"type", "rect"}, {"eps_m", r.eps_m}, {"t_r", r.t_r}, {"t_w", r.t_w}, {"t_f", r.t_f}, {"T", r.period}};
}

inline RunConfig config_from_json(const Json& j) {
    using namespace detail::cfg;
    RunConfig c;
    reject_unknown(j, "", {"system", "pulse", "sim", "pso", "fitness", "analytic", "output_dir"});

    if (!j.contains("system")) throw SchemaError("missing required key 'system'");
    const auto& s = j.at("system");
    reject_unknown(s, "system", {"delta", "U", "gamma", "fock_dim"});
    c.system.delta = number(s, "system", "delta", 0.0, true);
    c.system.u = number(s, "system", "U", 0.0, true);
    c.system.gamma = number(s, "system", "gamma", 1.0);
    c.system.fock_dim = static_cast<int>(integer(s, "system", "fock_dim", 10));
    try {
        c.system.validate();
    } catch (const InvalidArgument& e) {
        throw SchemaError(std::string("system: ") + e.what());
    }

    if (!j.contains("pulse")) throw SchemaError("missing required key 'pulse'");
    c.pulse = pulse_from_json(j.at("pulse"));

    if (j.contains("sim")) {
        const auto& m = j.at("sim");
        reject_unknown(m, "sim", {"t_end", "dt_out", "rtol", "atol"});
        c.sim.t_end = number(m, "sim", "t_end", c.sim.t_end);
        c.sim.dt_out = number(m, "sim", "dt_out", c.sim.dt_out);
        c.sim.rtol = number(m, "sim", "rtol", c.sim.rtol);
        c.sim.atol = number(m, "sim", "atol", c.sim.atol);
        if (c.sim.t_end < 0.0) throw SchemaError("key 'sim.t_end' must be non-negative");
        if (!(c.sim.dt_out > 0.0)) throw SchemaError("key 'sim.dt_out' must be positive");
        if (!(c.sim.rtol > 0.0) || !(c.sim.atol > 0.0)) throw SchemaError("sim tolerances must be positive");
    }

    if (j.contains("pso")) {
        const auto& p = j.at("pso");
        reject_unknown(p, "pso", {"n_particles", "n_iters", "w", "f1", "f2", "seed", "v_max_frac", "threads", "bounds"});
        c.pso.n_particles = static_cast<int>(integer(p, "pso", "n_particles", c.pso.n_particles));
        c.pso.n_iters = static_cast<int>(integer(p, "pso", "n_iters", c.pso.n_iters));
        c.pso.w = number(p, "pso", "w", c.pso.w);
        c.pso.f1 = number(p, "pso", "f1", c.pso.f1);
        c.pso.f2 = number(p, "pso", "f2", c.pso.f2);
        const auto seed = integer(p, "pso", "seed", 0);
        if (seed < 0) throw SchemaError("key 'pso.seed' must be non-negative");
        c.pso.seed = static_cast<std::uint64_t>(seed);
        c.pso.v_max_frac = number(p, "pso", "v_max_frac", c.pso.v_max_frac);
        const auto threads = integer(p, "pso", "threads", c.pso.threads);
        if (threads < 0) throw SchemaError("key 'pso.threads' must be non-negative");
        c.pso.threads = static_cast<unsigned>(threads);
        try {
            c.pso.validate();
        } catch (const InvalidArgument& e) {
            throw SchemaError(std::string("pso: ") + e.what());
        }
        if (p.contains("bounds")) {
            const auto& b = p.at("bounds");
            if (!b.is_object()) throw SchemaError("pso.bounds: expected an object");
            const auto family = family_of(c.pulse);
            for (const auto& [name, range] : b.items()) {
                try {
                    parameter_index(family, name);
                } catch (const InvalidArgument&) {
                    throw SchemaError("unknown key 'pso.bounds." + name + "'");
                }
                if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
                    throw SchemaError("key 'pso.bounds." + name + "' must be [lo, hi]");
                const double lo = range[0].get<double>(), hi = range[1].get<double>();
                if (!(lo < hi)) throw SchemaError("key 'pso.bounds." + name + "' needs lo < hi");
                c.bounds[name] = {lo, hi};
            }
        }
    }

    if (j.contains("fitness")) {
        const auto& f = j.at("fitness");
        reject_unknown(f, "fitness", {"window_start_frac", "n_floor"});
        c.window_start_frac = number(f, "fitness", "window_start_frac", c.window_start_frac);
        c.n_floor = number(f, "fitness", "n_floor", c.n_floor);
        if (!(c.window_start_frac > 0.0 && c.window_start_frac < 1.0))
            throw SchemaError("key 'fitness.window_start_frac' must lie in (0, 1)");
        if (!(c.n_floor > 0.0)) throw SchemaError("key 'fitness.n_floor' must be positive");
    }

    if (j.contains("analytic")) {
        const auto& a = j.at("analytic");
        reject_unknown(a, "analytic", {"k_max"});
        c.k_max = static_cast<int>(integer(a, "analytic", "k_max", 0));
        if (c.k_max < 0) throw SchemaError("key 'analytic.k_max' must be non-negative");
    }

    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw SchemaError("key 'output_dir' must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

inline pso::Bounds bounds_for(const RunConfig& c) {
    const auto family = family_of(c.pulse);
    auto b = default_bounds(family);
    const auto& names = parameter_names(family);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (const auto it = c.bounds.find(names[i]); it != c.bounds.end()) {
            b.lo[i] = it->second.first;
            b.hi[i] = it->second.second;
        }
    return b;
}

inline Json config_to_json(const RunConfig& c) {
    Json bounds = Json::object();
    const auto b = bounds_for(c);
    const auto& names = parameter_names(family_of(c.pulse));
    for (std::size_t i = 0; i < names.size(); ++i) bounds[names[i]] = {b.lo[i], b.hi[i]};
    return {
        {"system", {{"delta", c.system.delta}, {"U", c.system.u}, {"gamma", c.system.gamma}, {"fock_dim", c.system.fock_dim}}},
        {"pulse", pulse_to_json(c.pulse)},
        {"sim", {{"t_end", c.sim.t_end}, {"dt_out", c.sim.dt_out}, {"rtol", c.sim.rtol}, {"atol", c.sim.atol}}},
        {"pso",
         {{"n_particles", c.pso.n_particles},
          {"n_iters", c.pso.n_iters},
          {"w", c.pso.w},
          {"f1", c.pso.f1},
          {"f2", c.pso.f2},
          {"seed", c.pso.seed},
          {"v_max_frac", c.pso.v_max_frac},
          {"threads", c.pso.threads},
          {"bounds", bounds}}},
        {"fitness", {{"window_start_frac", c.window_start_frac}, {"n_floor", c.n_floor}}},
        {"analytic", {{"k_max", c.k_max}}},
        {"output_dir", c.output_dir},
    };
}

inline EvolveOptions evolve_options(const RunConfig& c) {
    EvolveOptions o;
    o.t_end = c.sim.t_end;
    o.dt_out = c.sim.dt_out;
    o.n_floor = c.n_floor;
    o.integrator.rtol = c.sim.rtol;
    o.integrator.atol = c.sim.atol;
    o.window_start_frac = c.window_start_frac;
    return o;
}

inline FitnessSpec fitness_spec(const RunConfig& c) {
    FitnessSpec f;
    f.family = family_of(c.pulse);
    f.u = c.system.u;
    f.gamma = c.system.gamma;
    f.fock_dim = c.system.fock_dim;
    f.window_start_frac = c.window_start_frac;
    f.n_floor = c.n_floor;
    f.dt_out = c.sim.dt_out;
    f.integrator.rtol = c.sim.rtol;
    f.integrator.atol = c.sim.atol;
    return f;
}

}  // namespace blockade
