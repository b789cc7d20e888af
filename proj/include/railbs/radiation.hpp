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

#include <cmath>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "railbs/geometry.hpp"

namespace railbs
{

struct PatternParams
{
    double theta_max_rad = kPi / 3.0;
    double dtheta_rad = kPi / 12.0;
    double dphi_rad = kPi / 12.0;
    double g_max_dbi = 8.0;
    double theta3db_rad = kPi / 6.0;
    double phi3db_rad = kPi / 6.0;
    double g_s_db = 30.0;
    double g_v_db = 30.0;
    double quadrature_step_rad = 0.25 * kPi / 180.0;
};

struct Mode
{
    double steer_elevation_rad;
    double steer_azimuth_rad;
    double delta_g_db = 0.0;
};

// Steering pairs (elevation, azimuth) in mode order: azimuth varies fastest.
// Throws ConfigError if the steps do not tile their ranges or theta_max is
// outside [pi/6, pi/3].
std::vector<std::pair<double, double>> enumerate_modes(double theta_max, double dtheta, double dphi);

// Azimuth and elevation attenuation in dB (both <= 0).
double attenuation_azimuth(double phi, double steer_phi, double phi3db, double g_s_db);
double attenuation_elevation(double theta, double steer_theta, double theta3db, double g_v_db);

// Directional gain of a single mode in dBi.
double pattern_gain_db(const PatternParams &params, const Mode &mode, double theta, double phi);

// Trapezoid approximation of the double integral of 10^(A/10) cos(theta)
// over theta in [-pi/2, pi/2] and phi in [-pi, pi].
double integrate_radiated_power(const std::function<double(double theta, double phi)> &gain_db, double step);

/// The discrete set of radiation modes with power-equalizing gain offsets.
///
/// Mode indices are 0-based here; mode p steers to
/// (-theta_max + floor(p / P_h) dtheta, -pi/2 + (p mod P_h) dphi).
/// Construction integrates every mode's radiated power once and stores the
/// offsets that bring it to the boresight mode's power; afterwards the
/// codebook is immutable and safe to share across threads.
class PatternCodebook
{
public:
    // Builds and calibrates. Throws ConfigError when the grid has no boresight mode.
    explicit PatternCodebook(const PatternParams &params);

    const PatternParams &params() const { return params_; }
    int size() const { return static_cast<int>(modes_.size()); }
    int horizontal_count() const { return p_h_; }
    int vertical_count() const { return p_v_; }
    int default_mode() const { return default_mode_; }
    double default_power() const { return p_def_; }
    const Mode &mode(int p) const;
    const std::vector<Mode> &modes() const { return modes_; }

    double gain_db(int p, double theta, double phi) const;
    double gain_linear(int p, const LocalPointing &local) const;

    // Linear gains of every mode towards one local direction.
    void gains_linear(const LocalPointing &local, std::vector<double> &out) const;

    // Radiated power of mode p including its offset.
    double radiated_power(int p, double step) const;

    // Calibrated codebook restricted to the listed modes, in the given order.
    // The list must contain the boresight mode; the grid counts become (size, 1).
    PatternCodebook subset(const std::vector<int> &modes) const;

private:
    PatternCodebook() = default;

    PatternParams params_;
    int p_h_ = 0;
    int p_v_ = 0;
    int default_mode_ = -1;
    double p_def_ = 0.0;
    std::vector<Mode> modes_;
};

// Radiated power of a mode evaluated without its offset (the "template" power).
double template_radiated_power(const PatternParams &params, const Mode &mode, double step);

// Mode table as CSV: p (1-based), theta_p_rad, phi_p_rad, delta_g_db.
void write_codebook_csv(std::ostream &os, const PatternCodebook &codebook);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace railbs
