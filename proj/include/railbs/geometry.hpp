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

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace railbs
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Slack used when checking the separation constraint on computed angles.
inline constexpr double kSeparationTol = 1e-12;

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

// Shortest distance between two points on the unit circle, in [0, pi].
double circular_distance(double a, double b);

// Local-to-global rotation for an array at rail azimuth phi. Columns are the
// local x (down), y (tangent) and z (outward normal) axes in global coordinates.
Mat3 rotation_matrix(double phi);

// Outward unit normal of an array at rail azimuth phi.
Vec3 rail_normal(double phi);

// Element grid factorization closest to square with rows <= cols.
std::pair<int, int> upa_factorization(int n);

struct GeometryParams
{
    double rail_radius_m = 1.0;
    int array_count = 1;
    int antennas_per_array = 1;
    double min_separation_rad = kPi / 24.0;
    double element_spacing_m = 0.0625;
    std::optional<double> array_width_m; // back-derived from the separation if absent
    std::optional<int> upa_rows;
    std::optional<int> upa_cols;
    std::vector<double> azimuths_rad; // one per array
};

/// Rail radius, array layout and the current array azimuths.
///
/// Instances are validated on construction: rows*cols == N, the width and
/// minimum separation agree (beta = 2 atan(L / 2R)), and every pair of arrays
/// keeps at least beta of circular separation. Azimuths are stored wrapped.
class StationGeometry
{
public:
    explicit StationGeometry(const GeometryParams &params);

    double rail_radius() const { return rail_radius_; }
    int array_count() const { return static_cast<int>(azimuths_.size()); }
    int antennas_per_array() const { return antennas_; }
    int total_antennas() const { return antennas_ * array_count(); }
    double array_width() const { return array_width_; }
    double min_separation() const { return min_separation_; }
    double element_spacing() const { return element_spacing_; }
    int upa_rows() const { return rows_; }
    int upa_cols() const { return cols_; }
    const std::vector<double> &azimuths() const { return azimuths_; }
    double azimuth(int b) const;

    // Local element offsets in row-major order (array plane is local x-y).
    const std::vector<Vec3> &local_positions() const { return local_; }

    // Copy with a different azimuth vector; throws InfeasibleError on violation.
    StationGeometry with_azimuths(std::vector<double> azimuths) const;

    GeometryParams params() const;

private:
    double rail_radius_;
    int antennas_;
    double array_width_;
    double min_separation_;
    double element_spacing_;
    int rows_;
    int cols_;
    std::vector<double> azimuths_;
    std::vector<Vec3> local_;
};

std::vector<Vec3> local_element_positions(const StationGeometry &geom);

// Element positions of array b (0-based) in the global frame.
std::vector<Vec3> global_element_positions(const StationGeometry &geom, int b);

// Same, for an arbitrary azimuth (used for probe points that need not be feasible).
std::vector<Vec3> global_element_positions(const StationGeometry &geom, double phi);

// True when every pair of azimuths keeps at least min_sep of separation.
bool is_feasible(std::span<const double> azimuths, double min_sep);

// Closed arc starting at `start` (wrapped) and extending counter-clockwise by `length`.
struct Arc
{
    double start;
    double length;

    double end() const { return wrap_angle(start + length); }
    bool contains(double a, double tol = kSeparationTol) const;
};

// Feasible positions of array b with every other array fixed, as a sorted
// list of disjoint arcs. Throws InfeasibleError when the set is empty.
std::vector<Arc> feasible_arcs(int b, std::span<const double> azimuths, double min_sep);
std::vector<Arc> feasible_arcs(int b, const StationGeometry &geom);

// Nearest feasible angle to `phi` in circular distance. Inputs already inside
// an arc are returned unchanged; equidistant candidates resolve to the one
// with the smaller wrapped angle.
double project_to_feasible(double phi, std::span<const Arc> arcs);

/// Direction of a user seen from an array's local frame.
struct LocalPointing
{
    double x;
    double y;
    double z;
    double elevation_rad; // -asin(x)
    double azimuth_rad;   // atan2(y, z), 0 when y == z == 0
};

LocalPointing local_pointing(double phi_b, const Vec3 &f);

} // namespace railbs
