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

#include "railbs/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "railbs/errors.hpp"

namespace railbs
{

namespace
{

// Number of grid points of step `step` covering `range`, or -1 if it does not tile.
int tiling_count(double range, double step)
{
    if (!(step > 0.0))
        return -1;
    const double n = range / step;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
        return -1;
    return static_cast<int>(rounded) + 1;
}

struct Grid
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

Grid trapezoid_grid(double lo, double hi, double step)
{
    const int intervals = std::max(1, static_cast<int>(std::round((hi - lo) / step)));
    const double h = (hi - lo) / intervals;
    Grid g;
    g.nodes.resize(static_cast<std::size_t>(intervals) + 1);
    g.weights.assign(g.nodes.size(), h);
    for (int i = 0; i <= intervals; ++i)
        g.nodes[static_cast<std::size_t>(i)] = lo + i * h;
    g.nodes.back() = hi;
    g.weights.front() *= 0.5;
    g.weights.back() *= 0.5;
    return g;
}

} // namespace

std::vector<std::pair<double, double>> enumerate_modes(double theta_max, double dtheta, double dphi)
{
    if (theta_max < kPi / 6.0 - 1e-12 || theta_max > kPi / 3.0 + 1e-12)
        throw ConfigError("codebook.theta_max_rad must lie in [pi/6, pi/3]");
    const int p_v = tiling_count(2.0 * theta_max, dtheta);
    const int p_h = tiling_count(kPi, dphi);
    if (p_v < 0)
        throw ConfigError("codebook.dtheta_rad does not evenly tile [-theta_max, theta_max]");
    if (p_h < 0)
        throw ConfigError("codebook.dphi_rad does not evenly tile [-pi/2, pi/2]");

    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(p_v * p_h));
    for (int p = 0; p < p_v * p_h; ++p)
        out.emplace_back(-theta_max + (p / p_h) * dtheta, -kPi / 2.0 + (p % p_h) * dphi);
    return out;
}

double attenuation_azimuth(double phi, double steer_phi, double phi3db, double g_s_db)
{
    const double r = (phi - steer_phi) / phi3db;
    return -std::min(12.0 * r * r, g_s_db);
}

double attenuation_elevation(double theta, double steer_theta, double theta3db, double g_v_db)
{
    const double r = (theta - steer_theta) / theta3db;
    return -std::min(12.0 * r * r, g_v_db);
}

double pattern_gain_db(const PatternParams &params, const Mode &mode, double theta, double phi)
{
    const double ah = attenuation_azimuth(phi, mode.steer_azimuth_rad, params.phi3db_rad, params.g_s_db);
    const double av = attenuation_elevation(theta, mode.steer_elevation_rad, params.theta3db_rad, params.g_v_db);
    return params.g_max_dbi + mode.delta_g_db - std::min(-(ah + av), params.g_s_db);
}

double integrate_radiated_power(const std::function<double(double, double)> &gain_db, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("integrate_radiated_power: step must be positive");
    const Grid th = trapezoid_grid(-kPi / 2.0, kPi / 2.0, step);
    const Grid ph = trapezoid_grid(-kPi, kPi, step);
    double total = 0.0;
    for (std::size_t i = 0; i < th.nodes.size(); ++i)
    {
        const double wt = th.weights[i] * std::cos(th.nodes[i]);
        double row = 0.0;
        for (std::size_t j = 0; j < ph.nodes.size(); ++j)
            row += ph.weights[j] * db_to_linear(gain_db(th.nodes[i], ph.nodes[j]));
        total += wt * row;
    }
    return total;
}

double template_radiated_power(const PatternParams &params, const Mode &mode, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("template_radiated_power: step must be positive");
    const Grid th = trapezoid_grid(-kPi / 2.0, kPi / 2.0, step);
    const Grid ph = trapezoid_grid(-kPi, kPi, step);

    std::vector<double> av(th.nodes.size());
    for (std::size_t i = 0; i < th.nodes.size(); ++i)
        av[i] = attenuation_elevation(th.nodes[i], mode.steer_elevation_rad, params.theta3db_rad, params.g_v_db);
    std::vector<double> ah(ph.nodes.size());
    for (std::size_t j = 0; j < ph.nodes.size(); ++j)
        ah[j] = attenuation_azimuth(ph.nodes[j], mode.steer_azimuth_rad, params.phi3db_rad, params.g_s_db);

    // Integrate 10^(-min(-(ah+av), Gs)/10) and apply the constant gain afterwards.
    const double floor_lin = db_to_linear(-params.g_s_db);
    double total = 0.0;
    for (std::size_t i = 0; i < th.nodes.size(); ++i)
    {
        double row = 0.0;
        for (std::size_t j = 0; j < ph.nodes.size(); ++j)
        {
            const double att = ah[j] + av[i];
            row += ph.weights[j] * (att <= -params.g_s_db ? floor_lin : db_to_linear(att));
        }
        total += th.weights[i] * std::cos(th.nodes[i]) * row;
    }
    return db_to_linear(params.g_max_dbi + mode.delta_g_db) * total;
}

PatternCodebook::PatternCodebook(const PatternParams &params) : params_(params)
{
    if (!(params.theta3db_rad > 0.0) || !(params.phi3db_rad > 0.0))
        throw ConfigError("codebook beamwidths must be positive");
    if (!(params.g_s_db >= 0.0) || !(params.g_v_db >= 0.0))
        throw ConfigError("codebook.g_s_db and codebook.g_v_db must be non-negative");
    if (!(params.quadrature_step_rad > 0.0))
        throw ConfigError("codebook.quadrature_step_deg must be positive");

    const auto steer = enumerate_modes(params.theta_max_rad, params.dtheta_rad, params.dphi_rad);
    p_h_ = tiling_count(kPi, params.dphi_rad);
    p_v_ = static_cast<int>(steer.size()) / p_h_;

    modes_.reserve(steer.size());
    for (const auto &[theta, phi] : steer)
        modes_.push_back(Mode{theta, phi, 0.0});

    for (int p = 0; p < size(); ++p)
    {
        const Mode &m = modes_[static_cast<std::size_t>(p)];
        if (std::abs(m.steer_elevation_rad) < 1e-12 && std::abs(m.steer_azimuth_rad) < 1e-12)
        {
            default_mode_ = p;
            break;
        }
    }
    if (default_mode_ < 0)
        throw ConfigError("codebook grid does not contain the boresight mode (0, 0)");

    // Pin the boresight mode exactly at (0, 0) so its offset is zero by construction.
    modes_[static_cast<std::size_t>(default_mode_)].steer_elevation_rad = 0.0;
    modes_[static_cast<std::size_t>(default_mode_)].steer_azimuth_rad = 0.0;

    const double step = params.quadrature_step_rad;
    p_def_ = template_radiated_power(params_, modes_[static_cast<std::size_t>(default_mode_)], step);

    for (int p = 0; p < size(); ++p)
    {
        if (p == default_mode_)
            continue;
        Mode &m = modes_[static_cast<std::size_t>(p)];
        const double temp = template_radiated_power(params_, m, step);
        m.delta_g_db = 10.0 * std::log10(p_def_ / temp);
    }
}

const Mode &PatternCodebook::mode(int p) const
{
    if (p < 0 || p >= size())
        throw std::out_of_range("mode index " + std::to_string(p) + " out of range");
    return modes_[static_cast<std::size_t>(p)];
}

double PatternCodebook::gain_db(int p, double theta, double phi) const
{
    return pattern_gain_db(params_, mode(p), theta, phi);
}

double PatternCodebook::gain_linear(int p, const LocalPointing &local) const
{
    return db_to_linear(gain_db(p, local.elevation_rad, local.azimuth_rad));
}

void PatternCodebook::gains_linear(const LocalPointing &local, std::vector<double> &out) const
{
    out.resize(modes_.size());
    for (std::size_t p = 0; p < modes_.size(); ++p)
        out[p] = db_to_linear(pattern_gain_db(params_, modes_[p], local.elevation_rad, local.azimuth_rad));
}

PatternCodebook PatternCodebook::subset(const std::vector<int> &modes) const
{
    PatternCodebook out;
    out.params_ = params_;
    out.p_def_ = p_def_;
    for (int p : modes)
    {
        if (p == default_mode_)
            out.default_mode_ = static_cast<int>(out.modes_.size());
        out.modes_.push_back(mode(p));
    }
    if (out.default_mode_ < 0)
        throw ConfigError("codebook subset must keep the boresight mode");
    out.p_h_ = out.size();
    out.p_v_ = 1;
    return out;
}

double PatternCodebook::radiated_power(int p, double step) const
{
    return template_radiated_power(params_, mode(p), step);
}

void write_codebook_csv(std::ostream &os, const PatternCodebook &codebook)
{
    os << "p,theta_p_rad,phi_p_rad,delta_g_db\n";
    const auto old_precision = os.precision(17);
    for (int p = 0; p < codebook.size(); ++p)
    {
        const Mode &m = codebook.mode(p);
        os << (p + 1) << ',' << m.steer_elevation_rad << ',' << m.steer_azimuth_rad << ',' << m.delta_g_db << '\n';
    }
    os.precision(old_precision);
}

} // namespace railbs
