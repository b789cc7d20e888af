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
#include <span>
#include <variant>
#include <vector>

#include "railbs/channel.hpp"
#include "railbs/geometry.hpp"
#include "railbs/rng.hpp"

namespace railbs
{

struct Cuboid
{
    Vec3 center;
    Vec3 size;
};

struct HorizontalDisk
{
    Vec3 center; // disk lies in the plane z = center.z
    double radius;
};

struct Segment
{
    Vec3 a;
    Vec3 b;
};

struct Sphere
{
    Vec3 center;
    double radius;
};

struct Shell
{
    double r_min;
    double r_max;

    bool contains(const Vec3 &p) const;
    // Radial clamp onto [r_min, r_max]; returns true when the point moved.
    bool clamp(Vec3 &p) const;
};

using Region = std::variant<Cuboid, HorizontalDisk, Segment, Sphere, Shell>;

void validate_region(const Region &region);

// Only volumetric regions can contain points; disks and segments have zero volume.
bool region_has_volume(const Region &region);
bool region_contains(const Region &region, const Vec3 &p);

// Uniform point of the region restricted to the coverage shell (rejection).
// Throws ConfigError when no accepted point is found within the attempt cap.
Vec3 sample_region_uniform(const Region &region, const Shell &coverage, Rng &rng);

// Uniform point of the coverage shell outside every volumetric hotspot.
Vec3 sample_background_uniform(const Shell &coverage, std::span<const Region> hotspots, Rng &rng);

/// Static user distribution: a Poisson count per region, users uniform inside.
///
/// Region 0 is the background (coverage minus hotspots) with mean
/// sparsity * mean_total; the remaining mass is split evenly over the hotspots.
struct StaticScenario
{
    Shell coverage{50.0, 120.0};
    std::vector<Region> hotspots;
    double mean_total = 24.0;
    double sparsity = 0.3;

    // Building cuboid, ground disk and airway segment.
    static StaticScenario standard(double sparsity);

    void validate() const;
    std::vector<double> region_means() const;
};

// S samples; sample s and region i draw from their own stream derived from
// (seed, s, i), so a fixed seed reproduces the set bit for bit.
std::vector<ChannelSample> generate_static_samples(const StaticScenario &scenario, int samples,
                                                   std::uint64_t seed);

struct TimeVaryingParams
{
    Shell coverage{50.0, 120.0};
    std::vector<Vec3> mean_centers{Vec3(50.0, -30.0, -40.0), Vec3(-50.0, -10.0, 50.0), Vec3(-10.0, 60.0, 20.0)};
    double hotspot_radius_m = 15.0;
    double center_persistence = 0.99;
    double center_noise_std_m = 0.05;
    std::vector<double> survival_probs{0.98, 0.98, 0.98, 0.98}; // background first
    double offset_persistence = 0.95;
    double offset_noise_std_m = 0.6;
    double mean_total = 24.0;
    double sparsity = 0.15;
    int snapshots_per_period = 50;

    void validate() const;
    std::vector<double> region_means() const;
};

struct TrackedUser
{
    std::uint64_t id;
    int region;
    Vec3 position; // emitted (shell-clamped) position
    Vec3 offset;   // offset from the hotspot center, unused for the background
};

/// Snapshot-by-snapshot user process with drifting hotspot centers.
///
/// Centers follow a first-order Gauss-Markov recursion around their means.
/// Between snapshots every user of region i survives with probability rho_i
/// and Poisson((1 - rho_i) mu_i) newcomers arrive uniformly, which keeps each
/// region's population Poisson(mu_i) at every snapshot. Hotspot survivors move
/// with an AR(1) offset around the current center; background survivors stay.
class TimeVaryingScenario
{
public:
    TimeVaryingScenario(const TimeVaryingParams &params, std::uint64_t seed);

    // Advances one snapshot and returns it.
    ChannelSample step();
    ChannelSample current() const;

    int snapshot() const { return snapshot_; }
    const std::vector<Vec3> &centers() const { return centers_; }
    const std::vector<TrackedUser> &users() const { return users_; }
    std::vector<int> populations() const;
    const TimeVaryingParams &params() const { return params_; }

    // Static model with spherical hotspots at the current centers.
    StaticScenario distribution() const;

    std::uint64_t clipped_positions() const { return clipped_; }
    std::uint64_t emitted_positions() const { return emitted_; }

private:
    Vec3 hotspot_arrival(int region);
    std::vector<Region> hotspot_regions() const;

    TimeVaryingParams params_;
    Rng rng_;
    int snapshot_ = 0;
    std::uint64_t next_id_ = 0;
    std::vector<Vec3> centers_;
    std::vector<TrackedUser> users_;
    std::uint64_t clipped_ = 0;
    std::uint64_t emitted_ = 0;
};

} // namespace railbs
