// SPDX-License-Identifier: Apache-2.0
//
// railbs - rail-mounted reconfigurable antenna array simulator
// Copyright (C) 2026 The railbs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "railbs/config.hpp"
#include "railbs/errors.hpp"
#include "railbs/experiments.hpp"

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string scheme;
    unsigned threads = 0;
    bool timing = false;
    bool no_samples = false;
};

void add_common(CLI::App *cmd, Options &opt)
{
    cmd->add_option("--config", opt.config, "JSON experiment config (defaults apply when omitted)");
    cmd->add_option("--seed", opt.seed, "Master seed, overrides the config");
    cmd->add_option("--out", opt.out, "Output directory, overrides the config");
    cmd->add_option("--scheme", opt.scheme, "fpa, pa_only, ps_only or hmet, optionally with @B");
    cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
}

railbs::ExperimentConfig resolve(const Options &opt)
{
    railbs::ExperimentConfig cfg = opt.config.empty() ? railbs::parse_config("{}") : railbs::load_config(opt.config);
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (!opt.out.empty())
        cfg.output_dir = opt.out;
    if (opt.threads > 0)
        cfg.threads = opt.threads;
    if (!opt.scheme.empty())
    {
        cfg.scheme = opt.scheme;
        cfg.sweep.schemes = {opt.scheme};
        // Re-validate the override through the normal path.
        cfg = railbs::config_from_json(railbs::config_to_json(cfg));
        if (!opt.out.empty())
            cfg.output_dir = opt.out;
        if (opt.threads > 0)
            cfg.threads = opt.threads;
    }
    return cfg;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rail-mounted reconfigurable antenna array simulator"};
    app.require_subcommand(1);

    Options opt;
    auto *converge = app.add_subcommand("converge", "Run the solver for one scheme and write its objective trace");
    auto *sweep = app.add_subcommand("sweep", "Final sum-rate of each scheme over the sparsity axis");
    auto *timevary = app.add_subcommand("timevary", "Per-snapshot sum-rate under the time-varying user process");
    auto *dump = app.add_subcommand("dump-codebook", "Write the calibrated mode table");
    for (auto *cmd : {converge, sweep, timevary, dump})
        add_common(cmd, opt);
    converge->add_flag("--no-samples", opt.no_samples, "Skip samples.csv");
    sweep->add_flag("--timing", opt.timing, "Add a wall_time_s column (output is then not reproducible)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    railbs::ExperimentConfig cfg;
    try
    {
        cfg = resolve(opt);
    }
    catch (const railbs::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try
    {
        const railbs::PatternCodebook codebook(cfg.codebook);
        railbs::RunOptions run;
        run.write_samples = !opt.no_samples;
        run.record_wall_time = opt.timing;

        if (converge->parsed())
        {
            const auto result = railbs::run_convergence(cfg, codebook, run);
            std::printf("%s final sum-rate %.6f bit/s/Hz\n", cfg.scheme.c_str(), result.run.final_objective);
        }
        else if (sweep->parsed())
        {
            const auto result = railbs::run_sparsity_sweep(cfg, codebook, run);
            for (const auto &p : result.points)
                std::printf("%-12s eta=%.3f  %.6f bit/s/Hz\n", p.scheme.c_str(), p.sparsity, p.final_objective);
        }
        else if (timevary->parsed())
        {
            const auto result = railbs::run_time_varying(cfg, codebook, run);
            for (std::size_t i = 0; i < result.schemes.size(); ++i)
                std::printf("%-12s mean %.6f bit/s/Hz\n", result.schemes[i].c_str(), result.mean_rates[i]);
        }
        else
        {
            railbs::dump_codebook(cfg, codebook);
            std::printf("%d modes written to %s\n", codebook.size(), (cfg.output_dir / "codebook.csv").c_str());
        }
    }
    catch (const railbs::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const railbs::InfeasibleError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
