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

#include "railbs/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "railbs/errors.hpp"

namespace railbs
{

PhysicalConfig PhysicalConfig::free_space(double carrier_hz, double tx_power_w, double noise_power_w)
{
    PhysicalConfig phys;
    phys.wavelength_m = kSpeedOfLight / carrier_hz;
    phys.tx_power_w = tx_power_w;
    phys.noise_power_w = noise_power_w;
    const double r = phys.wavelength_m / (4.0 * kPi);
    phys.pathloss_ref = r * r;
    phys.pathloss_exp = 2.0;
    return phys;
}

void PhysicalConfig::validate() const
{
    if (!(wavelength_m > 0.0))
        throw ConfigError("physical: wavelength must be positive");
    if (!(tx_power_w > 0.0))
        throw ConfigError("physical.tx_power_w must be positive");
    if (!(noise_power_w > 0.0))
        throw ConfigError("physical: noise power must be positive");
    if (!(pathloss_ref > 0.0))
        throw ConfigError("physical.pathloss_ref must be positive");
    if (!(pathloss_exp > 0.0))
        throw ConfigError("physical.pathloss_exp must be positive");
}

double PhysicalConfig::power_gain(double distance_m) const
{
    return pathloss_ref * std::pow(distance_m, -pathloss_exp);
}

UserGeom UserGeom::from_position(const Vec3 &position, int region)
{
    const double d = position.norm();
    if (!(d > 0.0))
        throw std::invalid_argument("UserGeom: user at the origin");
    return UserGeom{position / d, d, region};
}

SelectionState::SelectionState(int samples, int arrays, int antennas, int mode_count, int initial_mode)
    : samples_(samples), arrays_(arrays), antennas_(antennas), mode_count_(mode_count)
{
    if (samples < 0 || arrays < 1 || antennas < 1 || mode_count < 1)
        throw std::invalid_argument("SelectionState: bad dimensions");
    if (mode_count > 65535)
        throw std::invalid_argument("SelectionState: too many modes");
    if (initial_mode < 0 || initial_mode >= mode_count)
        throw std::out_of_range("SelectionState: initial mode out of range");
    modes_.assign(static_cast<std::size_t>(samples) * static_cast<std::size_t>(arrays) *
                      static_cast<std::size_t>(antennas),
                  static_cast<std::uint16_t>(initial_mode));
}

void SelectionState::set(int s, int b, int n, int p)
{
    if (p < 0 || p >= mode_count_)
        throw std::out_of_range("SelectionState::set: mode out of range");
    modes_[offset(s, b) + static_cast<std::size_t>(n)] = static_cast<std::uint16_t>(p);
}

std::span<const std::uint16_t> SelectionState::array_modes(int s, int b) const
{
    if (s < 0 || s >= samples_ || b < 0 || b >= arrays_)
        throw std::out_of_range("SelectionState: sample or array index out of range");
    return {modes_.data() + offset(s, b), static_cast<std::size_t>(antennas_)};
}

std::vector<std::uint8_t> SelectionState::binary(int s, int b) const
{
    std::vector<std::uint8_t> z(static_cast<std::size_t>(mode_count_) * static_cast<std::size_t>(antennas_), 0);
    const auto modes = array_modes(s, b);
    for (int n = 0; n < antennas_; ++n)
        z[static_cast<std::size_t>(n * mode_count_ + modes[static_cast<std::size_t>(n)])] = 1;
    return z;
}

bool is_one_hot(std::span<const std::uint8_t> z, int mode_count, int antennas)
{
    if (z.size() != static_cast<std::size_t>(mode_count) * static_cast<std::size_t>(antennas))
        return false;
    for (int n = 0; n < antennas; ++n)
    {
        int ones = 0;
        for (int p = 0; p < mode_count; ++p)
        {
            const auto v = z[static_cast<std::size_t>(n * mode_count + p)];
            if (v > 1)
                return false;
            ones += v;
        }
        if (ones != 1)
            return false;
    }
    return true;
}

Eigen::VectorXcd steering_vector(const StationGeometry &geom, double phi, const Vec3 &f, double wavelength)
{
    const double k = kTwoPi / wavelength;
    const auto positions = global_element_positions(geom, phi);
    Eigen::VectorXcd a(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t n = 0; n < positions.size(); ++n)
        a(static_cast<Eigen::Index>(n)) = std::polar(1.0, -k * f.dot(positions[n]));
    return a;
}

Eigen::VectorXcd steering_vector(const StationGeometry &geom, int b, const Vec3 &f, double wavelength)
{
    return steering_vector(geom, geom.azimuth(b), f, wavelength);
}

Eigen::SparseMatrix<double, Eigen::RowMajor> gain_matrix(const PatternCodebook &codebook,
                                                         const StationGeometry &geom, int b, const Vec3 &f)
{
    const int n_ant = geom.antennas_per_array();
    const int p_count = codebook.size();
    const LocalPointing local = local_pointing(geom.azimuth(b), f);
    std::vector<double> gains;
    codebook.gains_linear(local, gains);

    Eigen::SparseMatrix<double, Eigen::RowMajor> m(n_ant, static_cast<Eigen::Index>(n_ant) * p_count);
    m.reserve(Eigen::VectorXi::Constant(n_ant, p_count));
    for (int n = 0; n < n_ant; ++n)
        for (int p = 0; p < p_count; ++p)
            m.insert(n, static_cast<Eigen::Index>(n) * p_count + p) = std::sqrt(gains[static_cast<std::size_t>(p)]);
    m.makeCompressed();
    return m;
}

Eigen::VectorXcd user_channel(const PatternCodebook &codebook, const StationGeometry &geom,
                              const PhysicalConfig &phys, int b, const UserGeom &user,
                              std::span<const std::uint8_t> z_b)
{
    if (!is_one_hot(z_b, codebook.size(), geom.antennas_per_array()))
        throw std::invalid_argument("user_channel: selection vector violates the one-mode-per-antenna constraint");
    Eigen::VectorXd z(static_cast<Eigen::Index>(z_b.size()));
    for (std::size_t i = 0; i < z_b.size(); ++i)
        z(static_cast<Eigen::Index>(i)) = z_b[i];

    const Eigen::VectorXd mz = gain_matrix(codebook, geom, b, user.pointing) * z;
    const Eigen::VectorXcd a = steering_vector(geom, b, user.pointing, phys.wavelength_m);
    return std::sqrt(phys.power_gain(user.distance_m)) * a.cwiseProduct(mz.cast<std::complex<double>>());
}

Eigen::MatrixXcd steering_block(const StationGeometry &geom, double phi, const ChannelSample &sample,
                                double wavelength)
{
    const auto &local = geom.local_positions();
    const auto n_ant = static_cast<Eigen::Index>(local.size());
    const auto k_users = static_cast<Eigen::Index>(sample.users.size());
    const double wavenumber = kTwoPi / wavelength;
    const Mat3 rot = rotation_matrix(phi);
    const Vec3 center = geom.rail_radius() * rail_normal(phi);

    Eigen::MatrixXcd block(n_ant, k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        const Vec3 &f = sample.users[static_cast<std::size_t>(k)].pointing;
        const Vec3 f_local = rot.transpose() * f;
        const double center_proj = f.dot(center);
        for (Eigen::Index n = 0; n < n_ant; ++n)
            block(n, k) = std::polar(1.0, -wavenumber * (center_proj + f_local.dot(local[static_cast<std::size_t>(n)])));
    }
    return block;
}

Eigen::MatrixXcd array_channel_block(const PatternCodebook &codebook, const PhysicalConfig &phys,
                                     const StationGeometry &geom, double phi, const ChannelSample &sample,
                                     std::span<const std::uint16_t> modes)
{
    Eigen::MatrixXcd block = steering_block(geom, phi, sample, phys.wavelength_m);
    for (Eigen::Index k = 0; k < block.cols(); ++k)
    {
        const UserGeom &u = sample.users[static_cast<std::size_t>(k)];
        const LocalPointing lp = local_pointing(phi, u.pointing);
        const double amp = std::sqrt(phys.power_gain(u.distance_m));
        int cached_mode = -1;
        double cached_amp = 0.0;
        for (Eigen::Index n = 0; n < block.rows(); ++n)
        {
            const int p = modes[static_cast<std::size_t>(n)];
            if (p != cached_mode)
            {
                cached_mode = p;
                cached_amp = amp * std::sqrt(codebook.gain_linear(p, lp));
            }
            block(n, k) *= cached_amp;
        }
    }
    return block;
}

Eigen::MatrixXcd channel_matrix(const PatternCodebook &codebook, const PhysicalConfig &phys,
                                const StationGeometry &geom, std::span<const double> azimuths,
                                const ChannelSample &sample, const SelectionState &selection, int s)
{
    const int n_ant = geom.antennas_per_array();
    const auto arrays = static_cast<int>(azimuths.size());
    Eigen::MatrixXcd h(static_cast<Eigen::Index>(n_ant) * arrays, static_cast<Eigen::Index>(sample.users.size()));
    for (int b = 0; b < arrays; ++b)
        h.middleRows(static_cast<Eigen::Index>(b) * n_ant, n_ant) =
            array_channel_block(codebook, phys, geom, azimuths[static_cast<std::size_t>(b)], sample,
                                selection.array_modes(s, b));
    return h;
}

double log2det_identity_plus(const Eigen::MatrixXcd &m)
{
    const auto k = m.rows();
    if (k == 0)
        return 0.0;
    Eigen::MatrixXcd a = m;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("log-det: matrix is not positive definite");
    double acc = 0.0;
    const auto &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < k; ++i)
        acc += std::log(l(i, i).real());
    return 2.0 * acc / std::log(2.0);
}

double sum_rate(const Eigen::MatrixXcd &h, std::span<const double> powers, double noise_power)
{
    const auto k = h.cols();
    if (static_cast<std::size_t>(k) != powers.size())
        throw std::invalid_argument("sum_rate: one power per user required");
    if (k == 0)
        return 0.0;
    if (!h.allFinite())
        throw NumericalError("sum_rate: non-finite channel entries");
    Eigen::VectorXd scale(k);
    for (Eigen::Index i = 0; i < k; ++i)
        scale(i) = std::sqrt(powers[static_cast<std::size_t>(i)] / noise_power);
    const Eigen::MatrixXcd scaled = h * scale.asDiagonal();
    Eigen::MatrixXcd gram(k, k);
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(scaled.adjoint());
    gram = gram.selfadjointView<Eigen::Lower>();
    return std::max(0.0, log2det_identity_plus(gram));
}

double sum_rate(const PhysicalConfig &phys, const Eigen::MatrixXcd &h)
{
    const std::vector<double> powers(static_cast<std::size_t>(h.cols()), phys.tx_power_w);
    return sum_rate(h, powers, phys.noise_power_w);
}

double average_sum_rate(const PhysicalConfig &phys, std::span<const ChannelSample> samples,
                        const StationGeometry &geom, const PatternCodebook &codebook,
                        const SelectionState &selection)
{
    if (selection.samples() != static_cast<int>(samples.size()) || selection.arrays() != geom.array_count() ||
        selection.antennas() != geom.antennas_per_array())
        throw std::invalid_argument("average_sum_rate: selection does not cover every sample and array");
    if (samples.empty())
        return 0.0;
    double total = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s)
        total += sum_rate(phys, channel_matrix(codebook, phys, geom, geom.azimuths(), samples[s], selection,
                                               static_cast<int>(s)));
    return total / static_cast<double>(samples.size());
}

} // namespace railbs
