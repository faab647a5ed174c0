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

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "blockade/commands.hpp"

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulsed Kerr-mode photon blockade: simulate, optimise, sweep and compare."};
    app.set_version_flag("--version", std::string(blockade::kVersion));

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool svg = false;
    app.add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides output_dir in the config)");
    auto* seed_opt = app.add_option("--seed", seed, "Swarm seed (overrides pso.seed)");
    app.add_flag("--svg", svg, "Also render SVG line plots");
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Integrate the master equation; trajectory.csv + summary.json");
    auto* optimize = app.add_subcommand("optimize", "Swarm search for the pulse minimising g2_min");
    auto* sweep = app.add_subcommand("sweep", "Scan g2_min along one pulse parameter");
    auto* compare = app.add_subcommand("analytic-compare",
                                       "Compare master-equation populations with the weak-excitation series");
    blockade::SweepRequest req;
    sweep->add_option("--param", req.param, "Parameter to scan")->required();
    sweep->add_option("--min", req.min, "Lower end of the scan")->required();
    sweep->add_option("--max", req.max, "Upper end of the scan")->required();
    sweep->add_option("--points", req.points, "Number of grid points")->check(CLI::PositiveNumber);
    for (auto* sub : {simulate, optimize, sweep, compare}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return kUsage;
    }

    try {
        const auto cfg = blockade::load_config(config_path);
        blockade::CommandOptions opts;
        opts.out_dir = out_opt->count() ? out_dir : cfg.output_dir;
        opts.svg = svg;
        if (seed_opt->count()) opts.seed = seed;

        if (simulate->parsed()) {
            const auto res = blockade::cmd_simulate(cfg, opts);
            std::cout << res.summary.dump(2) << '\n';
        } else if (optimize->parsed()) {
            const auto res = blockade::cmd_optimize(cfg, opts);
            std::cout << "best fitness " << res.run_result["best_fitness"] << " at "
                      << res.run_result["best_parameters"].dump() << '\n';
        } else if (sweep->parsed()) {
            const auto curve = blockade::cmd_sweep(cfg, req, opts);
            std::cout << "wrote " << curve.size() << " points to "
                      << (opts.out_dir / ("sweep_" + req.param + ".csv")).string() << '\n';
        } else if (compare->parsed()) {
            const auto res = blockade::cmd_analytic_compare(cfg, opts);
            std::cout << res.summary.dump(2) << '\n';
        }
    } catch (const blockade::SchemaError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const blockade::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const blockade::IntegrationError& e) {
        std::cerr << "integration failed: " << e.what() << '\n';
        return kNumerical;
    } catch (const blockade::InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
