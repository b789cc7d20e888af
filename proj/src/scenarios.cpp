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

#include "railbs/scenarios.hpp"

#include <cmath>
#include <string>

#include "railbs/errors.hpp"

namespace railbs
{

namespace
{

constexpr int kMaxRejections = 100000;

Vec3 uniform_direction(Rng &rng)
{
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double az = kTwoPi * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(az), r * std::sin(az), z};
}

Vec3 raw_sample(const Region &region, Rng &rng)
{
    return std::visit(
        [&rng](const auto &r) -> Vec3 {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Cuboid>)
            {
                const double x = uniform01(rng), y = uniform01(rng), z = uniform01(rng);
                return r.center + Vec3((x - 0.5) * r.size.x(), (y - 0.5) * r.size.y(), (z - 0.5) * r.size.z());
            }
            else if constexpr (std::is_same_v<T, HorizontalDisk>)
            {
                const double rad = r.radius * std::sqrt(uniform01(rng));
                const double az = kTwoPi * uniform01(rng);
                return r.center + Vec3(rad * std::cos(az), rad * std::sin(az), 0.0);
            }
            else if constexpr (std::is_same_v<T, Segment>)
            {
                return r.a + uniform01(rng) * (r.b - r.a);
            }
            else if constexpr (std::is_same_v<T, Sphere>)
            {
                const double rad = r.radius * std::cbrt(uniform01(rng));
                return r.center + rad * uniform_direction(rng);
            }
            else
            {
                const double lo = r.r_min * r.r_min * r.r_min;
                const double hi = r.r_max * r.r_max * r.r_max;
                const double rad = std::cbrt(lo + uniform01(rng) * (hi - lo));
                return rad * uniform_direction(rng);
            }
        },
        region);
}

} // namespace

bool Shell::contains(const Vec3 &p) const
{
    const double r = p.norm();
    return r >= r_min && r <= r_max;
}

bool Shell::clamp(Vec3 &p) const
{
    const double r = p.norm();
    if (r < r_min)
    {
        p = (r > 0.0 ? p / r : Vec3(1.0, 0.0, 0.0)) * r_min;
        return true;
    }
    if (r > r_max)
    {
        p *= r_max / r;
        return true;
    }
    return false;
}

void validate_region(const Region &region)
{
    std::visit(
        [](const auto &r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Cuboid>)
            {
                if (!(r.size.minCoeff() > 0.0))
                    throw ConfigError("cuboid region needs positive size");
            }
            else if constexpr (std::is_same_v<T, HorizontalDisk> || std::is_same_v<T, Sphere>)
            {
                if (!(r.radius > 0.0))
                    throw ConfigError("region radius must be positive");
            }
            else if constexpr (std::is_same_v<T, Segment>)
            {
                if (!((r.b - r.a).norm() > 0.0))
                    throw ConfigError("segment region needs distinct endpoints");
            }
            else
            {
                if (!(r.r_min > 0.0) || !(r.r_min < r.r_max))
                    throw ConfigError("shell region needs 0 < r_min < r_max");
            }
        },
        region);
}

bool region_has_volume(const Region &region)
{
    return std::holds_alternative<Cuboid>(region) || std::holds_alternative<Sphere>(region) ||
           std::holds_alternative<Shell>(region);
}

bool region_contains(const Region &region, const Vec3 &p)
{
    return std::visit(
        [&p](const auto &r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Cuboid>)
                return ((p - r.center).cwiseAbs() - 0.5 * r.size).maxCoeff() <= 0.0;
            else if constexpr (std::is_same_v<T, Sphere>)
                return (p - r.center).norm() <= r.radius;
            else if constexpr (std::is_same_v<T, Shell>)
                return r.contains(p);
            else
                return false;
        },
        region);
}

Vec3 sample_region_uniform(const Region &region, const Shell &coverage, Rng &rng)
{
    for (int attempt = 0; attempt < kMaxRejections; ++attempt)
    {
        const Vec3 p = raw_sample(region, rng);
        if (coverage.contains(p))
            return p;
    }
    throw ConfigError("region does not intersect the coverage shell (rejection sampling failed)");
}

Vec3 sample_background_uniform(const Shell &coverage, std::span<const Region> hotspots, Rng &rng)
{
    const Region shell = coverage;
    for (int attempt = 0; attempt < kMaxRejections; ++attempt)
    {
        const Vec3 p = raw_sample(shell, rng);
        bool inside = false;
        for (const Region &h : hotspots)
            if (region_contains(h, p))
            {
                inside = true;
                break;
            }
        if (!inside)
            return p;
    }
    throw ConfigError("hotspots cover the whole coverage shell (rejection sampling failed)");
}

StaticScenario StaticScenario::standard(double sparsity)
{
    StaticScenario s;
    s.sparsity = sparsity;
    s.hotspots = {
        Cuboid{Vec3(-50.0, -20.0, -30.0), Vec3(30.0, 30.0, 40.0)},
        HorizontalDisk{Vec3(80.0, 30.0, -50.0), 20.0},
        Segment{Vec3(10.0, 30.0, 40.0), Vec3(30.0, 30.0, 70.0)},
    };
    return s;
}

void StaticScenario::validate() const
{
    validate_region(coverage);
    for (const Region &h : hotspots)
        validate_region(h);
    if (!(mean_total >= 0.0))
        throw ConfigError("scenario.mean_total_users must be non-negative");
    if (!(sparsity >= 0.0 && sparsity <= 1.0))
        throw ConfigError("scenario.sparsity must lie in [0, 1]");
    if (hotspots.empty() && sparsity != 1.0)
        throw ConfigError("scenario.sparsity must be 1 when there are no hotspots");
}

std::vector<double> StaticScenario::region_means() const
{
    std::vector<double> mu(hotspots.size() + 1);
    mu[0] = sparsity * mean_total;
    for (std::size_t i = 1; i < mu.size(); ++i)
        mu[i] = (1.0 - sparsity) * mean_total / static_cast<double>(hotspots.size());
    return mu;
}

std::vector<ChannelSample> generate_static_samples(const StaticScenario &scenario, int samples,
                                                   std::uint64_t seed)
{
    if (samples < 1)
        throw ConfigError("scenario.samples must be at least 1");
    scenario.validate();
    const auto mu = scenario.region_means();

    std::vector<ChannelSample> out(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s)
    {
        ChannelSample &sample = out[static_cast<std::size_t>(s)];
        sample.index = s;
        const std::uint64_t sample_seed = derive_seed(seed, "static-sample", static_cast<std::uint64_t>(s));
        for (std::size_t i = 0; i < mu.size(); ++i)
        {
            Rng rng = make_rng(sample_seed, "region", i);
            const int count = sample_poisson(mu[i], rng);
            for (int u = 0; u < count; ++u)
            {
                const Vec3 p = (i == 0) ? sample_background_uniform(scenario.coverage, scenario.hotspots, rng)
                                        : sample_region_uniform(scenario.hotspots[i - 1], scenario.coverage, rng);
                sample.users.push_back(UserGeom::from_position(p, static_cast<int>(i)));
            }
        }
    }
    return out;
}

void TimeVaryingParams::validate() const
{
    validate_region(coverage);
    if (mean_centers.empty())
        throw ConfigError("time_varying.hotspot_centers must not be empty");
    if (!(hotspot_radius_m > 0.0))
        throw ConfigError("time_varying.hotspot_radius_m must be positive");
    auto unit_open = [](double v) { return v > 0.0 && v < 1.0; };
    if (!unit_open(center_persistence))
        throw ConfigError("time_varying.center_persistence must lie in (0, 1)");
    if (!unit_open(offset_persistence))
        throw ConfigError("time_varying.offset_persistence must lie in (0, 1)");
    if (survival_probs.size() != mean_centers.size() + 1)
        throw ConfigError("time_varying.survival_probs needs one entry per region (background first)");
    for (double r : survival_probs)
        if (!(r > 0.0 && r <= 1.0))
            throw ConfigError("time_varying.survival_probs entries must lie in (0, 1]");
    if (!(center_noise_std_m >= 0.0) || !(offset_noise_std_m >= 0.0))
        throw ConfigError("time_varying noise deviations must be non-negative");
    if (!(mean_total >= 0.0))
        throw ConfigError("scenario.mean_total_users must be non-negative");
    if (!(sparsity >= 0.0 && sparsity <= 1.0))
        throw ConfigError("scenario.sparsity must lie in [0, 1]");
    if (snapshots_per_period < 1)
        throw ConfigError("time_varying.snapshots_per_period must be at least 1");
}

std::vector<double> TimeVaryingParams::region_means() const
{
    std::vector<double> mu(mean_centers.size() + 1);
    mu[0] = sparsity * mean_total;
    for (std::size_t i = 1; i < mu.size(); ++i)
        mu[i] = (1.0 - sparsity) * mean_total / static_cast<double>(mean_centers.size());
    return mu;
}

TimeVaryingScenario::TimeVaryingScenario(const TimeVaryingParams &params, std::uint64_t seed)
    : params_(params), rng_(derive_seed(seed, "time-varying", 0)), centers_(params.mean_centers)
{
    params_.validate();
    const auto mu = params_.region_means();
    const auto hotspots = hotspot_regions();
    for (std::size_t i = 0; i < mu.size(); ++i)
    {
        const int count = sample_poisson(mu[i], rng_);
        for (int u = 0; u < count; ++u)
        {
            TrackedUser user{next_id_++, static_cast<int>(i), Vec3::Zero(), Vec3::Zero()};
            if (i == 0)
                user.position = sample_background_uniform(params_.coverage, hotspots, rng_);
            else
            {
                user.position = hotspot_arrival(static_cast<int>(i));
                user.offset = user.position - centers_[i - 1];
            }
            users_.push_back(user);
        }
    }
    emitted_ += users_.size();
}

std::vector<Region> TimeVaryingScenario::hotspot_regions() const
{
    std::vector<Region> out;
    out.reserve(centers_.size());
    for (const Vec3 &c : centers_)
        out.emplace_back(Sphere{c, params_.hotspot_radius_m});
    return out;
}

Vec3 TimeVaryingScenario::hotspot_arrival(int region)
{
    return sample_region_uniform(Sphere{centers_[static_cast<std::size_t>(region - 1)], params_.hotspot_radius_m},
                                 params_.coverage, rng_);
}

ChannelSample TimeVaryingScenario::step()
{
    std::normal_distribution<double> center_noise(0.0, params_.center_noise_std_m);
    std::normal_distribution<double> offset_noise(0.0, params_.offset_noise_std_m);

    for (std::size_t i = 0; i < centers_.size(); ++i)
    {
        const Vec3 &mean = params_.mean_centers[i];
        Vec3 eps;
        for (int d = 0; d < 3; ++d)
            eps(d) = center_noise(rng_);
        centers_[i] = mean + params_.center_persistence * (centers_[i] - mean) + eps;
    }

    const auto mu = params_.region_means();
    std::vector<TrackedUser> next;
    next.reserve(users_.size() + 8);
    for (const TrackedUser &u : users_)
    {
        const double rho = params_.survival_probs[static_cast<std::size_t>(u.region)];
        if (!(uniform01(rng_) < rho))
            continue;
        TrackedUser moved = u;
        if (u.region > 0)
        {
            Vec3 eta;
            for (int d = 0; d < 3; ++d)
                eta(d) = offset_noise(rng_);
            moved.offset = params_.offset_persistence * u.offset + eta;
            moved.position = centers_[static_cast<std::size_t>(u.region - 1)] + moved.offset;
            if (params_.coverage.clamp(moved.position))
                ++clipped_;
        }
        next.push_back(moved);
    }

    const auto hotspots = hotspot_regions();
    for (std::size_t i = 0; i < mu.size(); ++i)
    {
        const double rho = params_.survival_probs[i];
        const int arrivals = sample_poisson((1.0 - rho) * mu[i], rng_);
        for (int a = 0; a < arrivals; ++a)
        {
            TrackedUser user{next_id_++, static_cast<int>(i), Vec3::Zero(), Vec3::Zero()};
            if (i == 0)
                user.position = sample_background_uniform(params_.coverage, hotspots, rng_);
            else
            {
                user.position = hotspot_arrival(static_cast<int>(i));
                user.offset = user.position - centers_[i - 1];
            }
            next.push_back(user);
        }
    }

    users_ = std::move(next);
    emitted_ += users_.size();
    ++snapshot_;
    return current();
}

ChannelSample TimeVaryingScenario::current() const
{
    ChannelSample sample;
    sample.index = snapshot_;
    sample.users.reserve(users_.size());
    for (const TrackedUser &u : users_)
        sample.users.push_back(UserGeom::from_position(u.position, u.region));
    return sample;
}

std::vector<int> TimeVaryingScenario::populations() const
{
    std::vector<int> counts(centers_.size() + 1, 0);
    for (const TrackedUser &u : users_)
        ++counts[static_cast<std::size_t>(u.region)];
    return counts;
}

StaticScenario TimeVaryingScenario::distribution() const
{
    StaticScenario s;
    s.coverage = params_.coverage;
    s.hotspots = hotspot_regions();
    s.mean_total = params_.mean_total;
    s.sparsity = params_.sparsity;
    return s;
}

} // namespace railbs
