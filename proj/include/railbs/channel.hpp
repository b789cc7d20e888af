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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "railbs/geometry.hpp"
#include "railbs/radiation.hpp"

namespace railbs
{

inline constexpr double kSpeedOfLight = 299792458.0;

struct PhysicalConfig
{
    double wavelength_m = kSpeedOfLight / 2.4e9;
    double tx_power_w = 0.03;
    double noise_power_w = 1e-8;
    double pathloss_ref = 0.0; // linear gain at 1 m
    double pathloss_exp = 2.0;

    // Free-space reference gain (lambda / 4 pi)^2 with exponent 2.
    static PhysicalConfig free_space(double carrier_hz, double tx_power_w, double noise_power_w);

    void validate() const;
    double power_gain(double distance_m) const;
};

struct UserGeom
{
    Vec3 pointing;
    double distance_m;
    int region = -1;

    static UserGeom from_position(const Vec3 &position, int region = -1);
    Vec3 position() const { return distance_m * pointing; }
};

struct ChannelSample
{
    int index = 0;
    std::vector<UserGeom> users;
};

/// Pattern selection for every (sample, array, antenna).
///
/// Each antenna stores the index of its single active mode, so the one-hot
/// constraint on the binary selection vectors holds by construction. The
/// binary form (column-major vec of the P x N matrix) is produced on demand.
class SelectionState
{
public:
    SelectionState() = default;
    SelectionState(int samples, int arrays, int antennas, int mode_count, int initial_mode);

    int samples() const { return samples_; }
    int arrays() const { return arrays_; }
    int antennas() const { return antennas_; }
    int mode_count() const { return mode_count_; }

    int mode(int s, int b, int n) const { return modes_[offset(s, b) + static_cast<std::size_t>(n)]; }
    void set(int s, int b, int n, int p);
    std::span<const std::uint16_t> array_modes(int s, int b) const;

    // z_{b,s}: entry n * P + p is 1 iff antenna n uses mode p.
    std::vector<std::uint8_t> binary(int s, int b) const;

    bool operator==(const SelectionState &) const = default;

private:
    std::size_t offset(int s, int b) const
    {
        return (static_cast<std::size_t>(s) * static_cast<std::size_t>(arrays_) + static_cast<std::size_t>(b)) *
               static_cast<std::size_t>(antennas_);
    }

    int samples_ = 0;
    int arrays_ = 0;
    int antennas_ = 0;
    int mode_count_ = 0;
    std::vector<std::uint16_t> modes_;
};

// True when every antenna's block of P entries holds exactly one 1 and zeros elsewhere.
bool is_one_hot(std::span<const std::uint8_t> z, int mode_count, int antennas);

Eigen::VectorXcd steering_vector(const StationGeometry &geom, double phi, const Vec3 &f, double wavelength);
Eigen::VectorXcd steering_vector(const StationGeometry &geom, int b, const Vec3 &f, double wavelength);

// N x (P N) matrix with entry (n, n P + p) = sqrt(linear gain of mode p).
Eigen::SparseMatrix<double, Eigen::RowMajor> gain_matrix(const PatternCodebook &codebook,
                                                         const StationGeometry &geom, int b, const Vec3 &f);

// Channel of one user to array b for a binary selection z_b.
Eigen::VectorXcd user_channel(const PatternCodebook &codebook, const StationGeometry &geom,
                              const PhysicalConfig &phys, int b, const UserGeom &user,
                              std::span<const std::uint8_t> z_b);

// N x K matrix of steering phases for one array at azimuth phi.
Eigen::MatrixXcd steering_block(const StationGeometry &geom, double phi, const ChannelSample &sample,
                                double wavelength);

// N x K block of the channel matrix for one array at azimuth phi.
Eigen::MatrixXcd array_channel_block(const PatternCodebook &codebook, const PhysicalConfig &phys,
                                     const StationGeometry &geom, double phi, const ChannelSample &sample,
                                     std::span<const std::uint16_t> modes);

// Stacked NB x K channel matrix of sample s.
Eigen::MatrixXcd channel_matrix(const PatternCodebook &codebook, const PhysicalConfig &phys,
                                const StationGeometry &geom, std::span<const double> azimuths,
                                const ChannelSample &sample, const SelectionState &selection, int s);

// log2 det(I + M) for Hermitian positive semi-definite M.
double log2det_identity_plus(const Eigen::MatrixXcd &m);

// log2 det(I_K + D^1/2 H^H H D^1/2 / noise), with D = diag(powers).
double sum_rate(const Eigen::MatrixXcd &h, std::span<const double> powers, double noise_power);
double sum_rate(const PhysicalConfig &phys, const Eigen::MatrixXcd &h);

// Mean of the per-sample sum-rates, accumulated in sample order.
double average_sum_rate(const PhysicalConfig &phys, std::span<const ChannelSample> samples,
                        const StationGeometry &geom, const PatternCodebook &codebook,
                        const SelectionState &selection);

} // namespace railbs
