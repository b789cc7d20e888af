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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "railbs/channel.hpp"
#include "railbs/geometry.hpp"
#include "railbs/optimizer.hpp"
#include "railbs/radiation.hpp"
#include "railbs/scenarios.hpp"

namespace railbs
{

struct PhysicalSettings
{
    double carrier_hz = 2.4e9;
    double tx_power_w = 0.03;
    double noise_power_dbm = -50.0;
    std::optional<double> noise_power_w; // overrides the dBm value when present
    std::optional<double> pathloss_ref; // free space when absent
    double pathloss_exp = 2.0;

    PhysicalConfig resolve() const;
};

struct GeometrySettings
{
    double rail_radius_m = 1.0;
    int array_count = 16;
    int antennas_per_array = 4;
    std::optional<double> min_separation_rad;
    std::optional<double> array_width_m;
    std::optional<double> element_spacing_m; // half wavelength when absent
    std::optional<int> upa_rows;
    std::optional<int> upa_cols;
};

struct ScenarioSettings
{
    std::string kind = "static"; // "static" or "time_varying"
    int samples = 100;
    double mean_total_users = 24.0;
    double sparsity = 0.4;
    Shell coverage{50.0, 120.0};
    std::vector<Region> hotspots = StaticScenario::standard(0.0).hotspots;
    TimeVaryingParams time_varying;
    int snapshots = 200;
};

struct SweepSettings
{
    std::vector<double> sparsities{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    std::vector<std::string> schemes{"fpa", "pa_only", "ps_only", "ps_only@3", "hmet"};
};

struct InitSettings
{
    std::optional<std::vector<double>> azimuths_rad; // equally spaced when absent
    std::optional<int> mode;                         // 1-based; boresight when absent
};

/// Fully resolved experiment description. Defaults reproduce the reference
/// setup: 1 m rail, pi/24 separation, 117-mode codebook, 2.4 GHz, 30 mW
/// users, -50 dBm noise, S = 100 and mean 24 users.
struct ExperimentConfig
{
    std::uint64_t seed = 1;
    PhysicalSettings physical;
    GeometrySettings geometry;
    PatternParams codebook;
    ScenarioSettings scenario;
    OptimizerConfig optimizer;
    std::string scheme = "hmet";
    int baseline_block_iterations = 6;
    SweepSettings sweep;
    InitSettings init;

    // Run options, not part of the experiment identity.
    std::filesystem::path output_dir = "out";
    unsigned threads = 1;

    PhysicalConfig physical_config() const { return physical.resolve(); }
    double resolved_min_separation() const;
    double resolved_element_spacing() const;
    GeometryParams geometry_params(int arrays, int antennas, std::vector<double> azimuths) const;
    StaticScenario static_scenario(double sparsity) const;
    TimeVaryingParams time_varying_params(double sparsity) const;
};

ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

// Reads, validates and resolves a config file; throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path &path);
ExperimentConfig parse_config(const std::string &text);

// FNV-1a of the canonical resolved JSON.
std::uint64_t config_hash(const ExperimentConfig &cfg);

} // namespace railbs
