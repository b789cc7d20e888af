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

#include "railbs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "railbs/errors.hpp"

namespace railbs
{

double wrap_angle(double a)
{
    if (!std::isfinite(a))
        throw NumericalError("wrap_angle: non-finite angle");
    double w = std::remainder(a, kTwoPi); // [-pi, pi]
    if (w <= -kPi)
        w += kTwoPi;
    return w;
}

double circular_distance(double a, double b)
{
    const double d = std::abs(wrap_angle(wrap_angle(a) - wrap_angle(b)));
    return std::min(d, kTwoPi - d);
}

Mat3 rotation_matrix(double phi)
{
    const double c = std::cos(phi), s = std::sin(phi);
    Mat3 r;
    r << 0.0, -s, c,
        0.0, c, s,
        -1.0, 0.0, 0.0;
    return r;
}

Vec3 rail_normal(double phi)
{
    return {std::cos(phi), std::sin(phi), 0.0};
}

std::pair<int, int> upa_factorization(int n)
{
    if (n < 1)
        throw ConfigError("upa_factorization: antenna count must be positive");
    int rows = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (rows > 1 && n % rows != 0)
        --rows;
    return {rows, n / rows};
}

namespace
{

std::vector<Vec3> centered_grid(int rows, int cols, double spacing)
{
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(rows * cols));
    const double x0 = 0.5 * (rows - 1) * spacing;
    const double y0 = 0.5 * (cols - 1) * spacing;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out.emplace_back(r * spacing - x0, c * spacing - y0, 0.0);
    return out;
}

} // namespace

StationGeometry::StationGeometry(const GeometryParams &p)
    : rail_radius_(p.rail_radius_m),
      antennas_(p.antennas_per_array),
      min_separation_(p.min_separation_rad),
      element_spacing_(p.element_spacing_m)
{
    if (!(rail_radius_ > 0.0))
        throw ConfigError("geometry.rail_radius_m must be positive");
    if (antennas_ < 1)
        throw ConfigError("geometry.antennas_per_array must be positive");
    if (p.array_count < 1)
        throw ConfigError("geometry.array_count must be positive");
    if (!(min_separation_ > 0.0) || min_separation_ >= kPi)
        throw ConfigError("geometry.min_separation_rad must lie in (0, pi)");
    if (!(element_spacing_ > 0.0))
        throw ConfigError("geometry.element_spacing_m must be positive");

    const double derived_width = 2.0 * rail_radius_ * std::tan(0.5 * min_separation_);
    if (p.array_width_m)
    {
        const double beta = 2.0 * std::atan(*p.array_width_m / (2.0 * rail_radius_));
        if (std::abs(beta - min_separation_) > 1e-9)
            throw ConfigError("geometry.array_width_m is inconsistent with min_separation_rad");
        array_width_ = *p.array_width_m;
    }
    else
    {
        array_width_ = derived_width;
    }

    if (p.upa_rows.has_value() != p.upa_cols.has_value())
        throw ConfigError("geometry.upa_rows and geometry.upa_cols must be given together");
    if (p.upa_rows)
    {
        rows_ = *p.upa_rows;
        cols_ = *p.upa_cols;
        if (rows_ < 1 || cols_ < 1 || rows_ * cols_ != antennas_)
            throw ConfigError("geometry.upa_rows * geometry.upa_cols must equal antennas_per_array");
    }
    else
    {
        std::tie(rows_, cols_) = upa_factorization(antennas_);
    }

    if (static_cast<int>(p.azimuths_rad.size()) != p.array_count)
        throw ConfigError("geometry: expected " + std::to_string(p.array_count) + " azimuths, got " +
                          std::to_string(p.azimuths_rad.size()));
    azimuths_.reserve(p.azimuths_rad.size());
    for (double a : p.azimuths_rad)
        azimuths_.push_back(wrap_angle(a));
    if (!is_feasible(azimuths_, min_separation_))
        throw InfeasibleError("geometry: array azimuths violate the minimum separation");

    local_ = centered_grid(rows_, cols_, element_spacing_);
}

double StationGeometry::azimuth(int b) const
{
    if (b < 0 || b >= array_count())
        throw std::out_of_range("array index " + std::to_string(b) + " out of range");
    return azimuths_[static_cast<std::size_t>(b)];
}

StationGeometry StationGeometry::with_azimuths(std::vector<double> azimuths) const
{
    GeometryParams p = params();
    p.array_count = static_cast<int>(azimuths.size());
    p.azimuths_rad = std::move(azimuths);
    return StationGeometry(p);
}

GeometryParams StationGeometry::params() const
{
    GeometryParams p;
    p.rail_radius_m = rail_radius_;
    p.array_count = array_count();
    p.antennas_per_array = antennas_;
    p.min_separation_rad = min_separation_;
    p.element_spacing_m = element_spacing_;
    p.array_width_m = array_width_;
    p.upa_rows = rows_;
    p.upa_cols = cols_;
    p.azimuths_rad = azimuths_;
    return p;
}

std::vector<Vec3> local_element_positions(const StationGeometry &geom)
{
    return geom.local_positions();
}

std::vector<Vec3> global_element_positions(const StationGeometry &geom, double phi)
{
    const Mat3 rot = rotation_matrix(phi);
    const Vec3 center = geom.rail_radius() * rail_normal(phi);
    std::vector<Vec3> out;
    out.reserve(geom.local_positions().size());
    for (const Vec3 &r : geom.local_positions())
        out.push_back(center + rot * r);
    return out;
}

std::vector<Vec3> global_element_positions(const StationGeometry &geom, int b)
{
    return global_element_positions(geom, geom.azimuth(b));
}

bool is_feasible(std::span<const double> azimuths, double min_sep)
{
    for (std::size_t i = 0; i < azimuths.size(); ++i)
        for (std::size_t j = i + 1; j < azimuths.size(); ++j)
            if (circular_distance(azimuths[i], azimuths[j]) < min_sep - kSeparationTol)
                return false;
    return true;
}

bool Arc::contains(double a, double tol) const
{
    if (length >= kTwoPi)
        return true;
    double offset = wrap_angle(a) - start;
    if (offset < 0.0)
        offset += kTwoPi;
    if (offset <= length + tol)
        return true;
    // just below the start point
    return kTwoPi - offset <= tol;
}

std::vector<Arc> feasible_arcs(int b, std::span<const double> azimuths, double min_sep)
{
    const int count = static_cast<int>(azimuths.size());
    if (b < 0 || b >= count)
        throw std::out_of_range("feasible_arcs: array index out of range");

    std::vector<double> others;
    others.reserve(azimuths.size());
    for (int j = 0; j < count; ++j)
        if (j != b)
            others.push_back(wrap_angle(azimuths[static_cast<std::size_t>(j)]));

    if (others.empty())
        return {Arc{kPi, kTwoPi}};

    std::sort(others.begin(), others.end());
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < others.size(); ++i)
    {
        const double lo = others[i];
        const double hi = (i + 1 < others.size()) ? others[i + 1] : others[0] + kTwoPi;
        const double gap = (hi - lo) - 2.0 * min_sep;
        if (gap >= -kSeparationTol)
            arcs.push_back(Arc{wrap_angle(lo + min_sep), std::max(gap, 0.0)});
    }
    if (arcs.empty())
        throw InfeasibleError("feasible_arcs: no feasible position for array " + std::to_string(b));

    std::sort(arcs.begin(), arcs.end(), [](const Arc &x, const Arc &y) { return x.start < y.start; });
    return arcs;
}

std::vector<Arc> feasible_arcs(int b, const StationGeometry &geom)
{
    return feasible_arcs(b, geom.azimuths(), geom.min_separation());
}

double project_to_feasible(double phi, std::span<const Arc> arcs)
{
    if (arcs.empty())
        throw InfeasibleError("project_to_feasible: empty feasible set");
    const double x = wrap_angle(phi);
    for (const Arc &arc : arcs)
        if (arc.contains(x, 0.0))
            return x;

    double best = 0.0;
    double best_dist = kTwoPi;
    auto consider = [&](double candidate) {
        const double d = circular_distance(x, candidate);
        if (d < best_dist || (d == best_dist && candidate < best))
        {
            best = candidate;
            best_dist = d;
        }
    };
    for (const Arc &arc : arcs)
    {
        consider(arc.start);
        consider(arc.end());
    }
    return best;
}

LocalPointing local_pointing(double phi_b, const Vec3 &f)
{
    const double norm = f.norm();
    if (!(std::abs(norm - 1.0) <= 1e-9))
        throw std::invalid_argument("local_pointing: pointing vector is not unit length");

    const Vec3 l = rotation_matrix(phi_b).transpose() * f;
    LocalPointing out{l.x(), l.y(), l.z(), 0.0, 0.0};
    out.elevation_rad = -std::asin(std::clamp(l.x(), -1.0, 1.0));
    out.azimuth_rad = (l.y() == 0.0 && l.z() == 0.0) ? 0.0 : std::atan2(l.y(), l.z());
    return out;
}

} // namespace railbs
