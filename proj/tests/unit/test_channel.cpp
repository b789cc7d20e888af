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

#include <doctest.h>

#include <cmath>
#include <random>

#include "railbs/channel.hpp"
#include "railbs/errors.hpp"

using namespace railbs;

namespace
{

const PatternCodebook &codebook()
{
    static const PatternCodebook cb{PatternParams{}};
    return cb;
}

StationGeometry make_geom(int arrays, int antennas)
{
    GeometryParams p;
    p.array_count = arrays;
    p.antennas_per_array = antennas;
    p.element_spacing_m = 0.0625;
    for (int b = 0; b < arrays; ++b)
        p.azimuths_rad.push_back(wrap_angle(kTwoPi * (b + 1) / arrays - kPi));
    return StationGeometry(p);
}

PhysicalConfig phys()
{
    return PhysicalConfig::free_space(2.4e9, 0.03, 1e-8);
}

// log2 det(I_NB + (1/sigma^2) sum_k p_k h_k h_k^H) through a full LU determinant.
double direct_rate(const Eigen::MatrixXcd &h, const std::vector<double> &powers, double noise)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
    for (Eigen::Index k = 0; k < h.cols(); ++k)
        a += (powers[static_cast<std::size_t>(k)] / noise) * h.col(k) * h.col(k).adjoint();
    return std::log2(std::abs(a.determinant()));
}

ChannelSample random_sample(std::mt19937_64 &rng, int users, int index = 0)
{
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> dist(50.0, 120.0);
    ChannelSample s{index, {}};
    for (int k = 0; k < users; ++k)
        s.users.push_back(UserGeom::from_position(Vec3(n01(rng), n01(rng), n01(rng)).normalized() * dist(rng)));
    return s;
}

} // namespace

TEST_CASE("free-space physical constants")
{
    const auto p = phys();
    CHECK(p.wavelength_m == doctest::Approx(kSpeedOfLight / 2.4e9));
    CHECK(p.pathloss_ref == doctest::Approx(std::pow(p.wavelength_m / (4 * kPi), 2)));
    CHECK(p.power_gain(2.0) == doctest::Approx(p.pathloss_ref / 4.0));
}

TEST_CASE("steering vector")
{
    const StationGeometry g = make_geom(3, 4);
    const double lambda = phys().wavelength_m;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int i = 0; i < 20; ++i)
    {
        const Vec3 f = Vec3(n01(rng), n01(rng), n01(rng)).normalized();
        const auto a = steering_vector(g, 1, f, lambda);
        const auto pos = global_element_positions(g, 1);
        for (Eigen::Index n = 0; n < a.size(); ++n)
        {
            CHECK(std::abs(std::abs(a(n)) - 1.0) < 1e-12);
            const double phase = -kTwoPi / lambda * f.dot(pos[static_cast<std::size_t>(n)]);
            CHECK(std::abs(a(n) - std::polar(1.0, phase)) < 1e-12);
        }
    }

    // Single element half a wavelength out along x.
    GeometryParams p;
    p.rail_radius_m = lambda / 2;
    p.azimuths_rad = {0.0};
    p.min_separation_rad = kPi / 24;
    p.element_spacing_m = 0.01;
    const StationGeometry half(p);
    const auto a = steering_vector(half, 0, Vec3(1, 0, 0), lambda);
    CHECK(std::abs(a(0) - std::complex<double>(-1.0, 0.0)) < 1e-12);
    const auto o = steering_vector(half, 0, Vec3(0, 1, 0), lambda);
    CHECK(std::abs(o(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("gain matrix")
{
    const StationGeometry g = make_geom(2, 4);
    const Vec3 f = Vec3(0.3, -0.8, 0.5).normalized();
    const auto m = gain_matrix(codebook(), g, 0, f);
    CHECK(m.rows() == 4);
    CHECK(m.cols() == 4 * 117);
    CHECK(m.nonZeros() == 4 * 117);
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it)
        {
            CHECK(it.value() > 0.0);
            CHECK(it.col() / 117 == it.row());
        }
    const auto lp = local_pointing(g.azimuth(0), f);
    for (int p : {0, 58, 116})
    {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(4 * 117);
        for (int n = 0; n < 4; ++n)
            z(n * 117 + p) = 1.0;
        const Eigen::VectorXd mz = m * z;
        for (int n = 0; n < 4; ++n)
            CHECK(mz(n) == doctest::Approx(std::sqrt(codebook().gain_linear(p, lp))).epsilon(1e-14));
    }
}

TEST_CASE("one-hot selection")
{
    SelectionState sel(2, 3, 4, 117, 58);
    for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 3; ++b)
            CHECK(is_one_hot(sel.binary(s, b), 117, 4));
    sel.set(1, 2, 3, 7);
    CHECK(sel.mode(1, 2, 3) == 7);
    auto z = sel.binary(1, 2);
    CHECK(z[3 * 117 + 7] == 1);
    CHECK(is_one_hot(z, 117, 4));
    z[3 * 117 + 8] = 1;
    CHECK_FALSE(is_one_hot(z, 117, 4));
    z[3 * 117 + 8] = 0;
    z[3 * 117 + 7] = 0;
    CHECK_FALSE(is_one_hot(z, 117, 4));
    CHECK_THROWS(sel.set(0, 0, 0, 117));
}

TEST_CASE("user channel")
{
    const StationGeometry g = make_geom(2, 4);
    const auto pc = phys();
    const UserGeom u = UserGeom::from_position(Vec3(40.0, -60.0, 25.0));
    SelectionState sel(1, 2, 4, 117, 58);
    sel.set(0, 1, 2, 30);
    const auto z = sel.binary(0, 1);
    const auto h = user_channel(codebook(), g, pc, 1, u, z);
    const auto lp = local_pointing(g.azimuth(1), u.pointing);
    for (int n = 0; n < 4; ++n)
    {
        const double gain = codebook().gain_linear(sel.mode(0, 1, n), lp);
        CHECK(std::norm(h(n)) == doctest::Approx(pc.power_gain(u.distance_m) * gain).epsilon(1e-12));
    }

    const UserGeom far = UserGeom::from_position(2.0 * u.position());
    const auto h2 = user_channel(codebook(), g, pc, 1, far, z);
    CHECK(h2.squaredNorm() == doctest::Approx(h.squaredNorm() / 4.0).epsilon(1e-12));

    // Block assembly agrees with the per-user form.
    ChannelSample sample{0, {u, far}};
    const auto block = array_channel_block(codebook(), pc, g, g.azimuth(1), sample, sel.array_modes(0, 1));
    CHECK((block.col(0) - h).norm() < 1e-12 * h.norm());
    CHECK((block.col(1) - h2).norm() < 1e-12 * h2.norm());

    auto bad = z;
    bad[0] = 1;
    CHECK_THROWS_AS(user_channel(codebook(), g, pc, 1, u, bad), std::invalid_argument);
}

TEST_CASE("boresight user at one metre")
{
    GeometryParams p;
    p.azimuths_rad = {0.4};
    p.element_spacing_m = 0.06;
    const StationGeometry g(p);
    const auto pc = phys();
    SelectionState sel(1, 1, 1, 117, 58);
    const UserGeom u{rail_normal(0.4), 1.0, 0};
    const auto h = user_channel(codebook(), g, pc, 0, u, sel.binary(0, 0));
    CHECK(std::norm(h(0)) == doctest::Approx(pc.pathloss_ref * std::pow(10.0, 0.8)).epsilon(1e-12));
}

TEST_CASE("sum-rate anchors")
{
    const auto pc = phys();
    CHECK(sum_rate(pc, Eigen::MatrixXcd(8, 0)) == 0.0);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    Eigen::MatrixXcd h(6, 1);
    for (Eigen::Index i = 0; i < 6; ++i)
        h(i, 0) = std::complex<double>(n01(rng), n01(rng)) * 1e-4;
    CHECK(sum_rate(pc, h) ==
          doctest::Approx(std::log2(1.0 + pc.tx_power_w / pc.noise_power_w * h.squaredNorm())).epsilon(1e-12));

    Eigen::MatrixXcd nan = h;
    nan(2, 0) = std::complex<double>(std::nan(""), 0.0);
    CHECK_THROWS_AS(sum_rate(pc, nan), NumericalError);
}

TEST_CASE("Gram form against the direct determinant")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n01;
    std::uniform_int_distribution<int> rows(1, 16), cols(1, 8);
    std::uniform_real_distribution<double> pw(0.01, 0.1), scale(1e-5, 1e-3);
    for (int trial = 0; trial < 200; ++trial)
    {
        const int nb = rows(rng), k = cols(rng);
        Eigen::MatrixXcd h(nb, k);
        const double c = scale(rng);
        for (Eigen::Index i = 0; i < h.size(); ++i)
            h(i) = c * std::complex<double>(n01(rng), n01(rng));
        std::vector<double> powers(static_cast<std::size_t>(k));
        for (auto &p : powers)
            p = pw(rng);
        const double gram = sum_rate(h, powers, 1e-8);
        const double direct = direct_rate(h, powers, 1e-8);
        CHECK(std::abs(gram - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("sum-rate grows with a single entry")
{
    const auto pc = phys();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 3);
    double prev = 0.0;
    for (int i = 1; i <= 20; ++i)
    {
        h(1, 2) = std::polar(1e-5 * i, 0.7);
        const double r = sum_rate(pc, h);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("Monte Carlo average")
{
    const StationGeometry g = make_geom(3, 2);
    const auto pc = phys();
    std::mt19937_64 rng(4);
    std::vector<ChannelSample> samples;
    for (int s = 0; s < 4; ++s)
        samples.push_back(random_sample(rng, 3 + s, s));
    const SelectionState sel(4, 3, 2, 117, 58);

    double total = 0.0;
    for (int s = 0; s < 4; ++s)
        total += sum_rate(pc, channel_matrix(codebook(), pc, g, g.azimuths(), samples[static_cast<std::size_t>(s)], sel, s));
    CHECK(average_sum_rate(pc, samples, g, codebook(), sel) == doctest::Approx(total / 4).epsilon(1e-15));

    const std::vector<ChannelSample> one{samples[0]};
    const SelectionState sel1(1, 3, 2, 117, 58);
    CHECK(average_sum_rate(pc, one, g, codebook(), sel1) ==
          sum_rate(pc, channel_matrix(codebook(), pc, g, g.azimuths(), samples[0], sel1, 0)));

    std::vector<ChannelSample> twice = samples;
    twice.insert(twice.end(), samples.begin(), samples.end());
    const SelectionState sel8(8, 3, 2, 117, 58);
    CHECK(average_sum_rate(pc, twice, g, codebook(), sel8) ==
          doctest::Approx(average_sum_rate(pc, samples, g, codebook(), sel)).epsilon(1e-14));

    CHECK_THROWS(average_sum_rate(pc, samples, g, codebook(), sel1));
}
