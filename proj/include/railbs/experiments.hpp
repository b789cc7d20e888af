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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "railbs/baselines.hpp"
#include "railbs/config.hpp"
#include "railbs/optimizer.hpp"

namespace railbs
{

/// One comparison scheme resolved against a config. Names are "fpa",
/// "pa_only", "ps_only" or "hmet", optionally followed by "@B" to use B arrays
/// with the configured total antenna count (floor division).
struct SchemeSetup
{
    std::string name;
    SchemeSpec spec;
    StationGeometry layout; // azimuths hold the starting positions
    OptimizerConfig optimizer;
    int initial_mode = 0; // 0-based
};

SchemeSetup build_scheme(const ExperimentConfig &cfg, const PatternCodebook &codebook, const std::string &name);

// Monte Carlo samples shared by every scheme and sparsity point.
std::vector<ChannelSample> experiment_samples(const ExperimentConfig &cfg, double sparsity);

struct SchemeRun
{
    SchemeSetup setup;
    SolverState state;
    double final_objective = 0.0;
};

SchemeRun run_scheme(const ExperimentConfig &cfg, const PatternCodebook &codebook, const std::string &name,
                     const std::vector<ChannelSample> &samples);

struct RunOptions
{
    bool write_samples = true;
    bool record_wall_time = false; // adds a wall_time_s column to sweep.csv
};

struct ConvergenceResult
{
    SchemeRun run;
    std::vector<std::filesystem::path> files;
};

struct SweepPoint
{
    std::string scheme;
    double sparsity;
    double final_objective;
    double wall_time_s;
};

struct SweepResult
{
    std::vector<SweepPoint> points;
    std::vector<std::filesystem::path> files;
};

struct TimeVaryingResult
{
    std::vector<std::string> schemes;
    std::vector<std::vector<double>> rates; // [scheme][snapshot]
    std::vector<double> mean_rates;
    std::vector<std::vector<std::vector<double>>> positions; // [scheme][period][array]
    std::uint64_t clipped_positions = 0;
    std::uint64_t emitted_positions = 0;
    std::vector<std::filesystem::path> files;
};

// Each runner writes into cfg.output_dir, including resolved_config.json and manifest.json.
ConvergenceResult run_convergence(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                                  const RunOptions &options = {});
SweepResult run_sparsity_sweep(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                               const RunOptions &options = {});
TimeVaryingResult run_time_varying(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                                   const RunOptions &options = {});
std::vector<std::filesystem::path> dump_codebook(const ExperimentConfig &cfg, const PatternCodebook &codebook);

} // namespace railbs
