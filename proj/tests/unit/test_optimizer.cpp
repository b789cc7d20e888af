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

#include <algorithm>
#include <cmath>
#include <random>

#include "railbs/baselines.hpp"
#include "railbs/errors.hpp"
#include "railbs/optimizer.hpp"
#include "railbs/scenarios.hpp"

using namespace railbs;

namespace
{

const PatternCodebook &full_codebook()
{
    static const PatternCodebook cb{PatternParams{}};
    return cb;
}

const PatternCodebook &nine_mode_codebook()
{
    static const PatternCodebook cb = [] {
        PatternParams p;
        p.theta_max_rad = kPi / 6;
        p.dtheta_rad = kPi / 6;
        p.dphi_rad = kPi / 2;
        return PatternCodebook(p);
    }();
    return cb;
}

PhysicalConfig phys()
{
    return PhysicalConfig::free_space(2.4e9, 0.03, 1e-8);
}

StationGeometry layout(int arrays, int antennas)
{
    GeometryParams p;
    p.array_count = arrays;
    p.antennas_per_array = antennas;
    p.element_spacing_m = phys().wavelength_m / 2;
    p.azimuths_rad = equally_spaced_azimuths(arrays);
    return StationGeometry(p);
}

ChannelSample random_users(std::mt19937_64 &rng, int users)
{
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> dist(50.0, 120.0);
    ChannelSample s;
    for (int k = 0; k < users; ++k)
        s.users.push_back(UserGeom::from_position(Vec3(n01(rng), n01(rng), 0.4 * n01(rng)).normalized() * dist(rng)));
    return s;
}

// Straight re-implementation of the per-sample log-det with an NB x NB determinant.
double oracle_rate(const PatternCodebook &cb, const PhysicalConfig &pc, const StationGeometry &g,
                   const std::vector<double> &az, const ChannelSample &sample, const SelectionState &sel, int s)
{
    const int n_ant = g.antennas_per_array();
    const int nb = n_ant * static_cast<int>(az.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(nb, nb);
    for (const UserGeom &u : sample.users)
    {
        Eigen::VectorXcd h(nb);
        for (std::size_t b = 0; b < az.size(); ++b)
        {
            const Mat3 r = rotation_matrix(az[b]);
            const Vec3 center = g.rail_radius() * Vec3(std::cos(az[b]), std::sin(az[b]), 0.0);
            const Vec3 fl = r.transpose() * u.pointing;
            const double theta = -std::asin(fl.x());
            const double phi = (fl.y() == 0.0 && fl.z() == 0.0) ? 0.0 : std::atan2(fl.y(), fl.z());
            for (int n = 0; n < n_ant; ++n)
            {
                const Vec3 pos = center + r * g.local_positions()[static_cast<std::size_t>(n)];
                const double gain_db = cb.gain_db(sel.mode(s, static_cast<int>(b), n), theta, phi);
                const double amp = std::sqrt(pc.pathloss_ref * std::pow(u.distance_m, -pc.pathloss_exp) *
                                             std::pow(10.0, gain_db / 10.0));
                h(static_cast<Eigen::Index>(b) * n_ant + n) =
                    amp * std::polar(1.0, -2.0 * kPi / pc.wavelength_m * u.pointing.dot(pos));
            }
        }
        a += (pc.tx_power_w / pc.noise_power_w) * h * h.adjoint();
    }
    return std::log2(std::abs(a.determinant()));
}

} // namespace

TEST_CASE("config validation")
{
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.backtrack_factor = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = OptimizerConfig{};
    cfg.max_cycles = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = OptimizerConfig{};
    cfg.eps_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("objective matches a direct evaluation")
{
    std::mt19937_64 rng(12);
    const auto g = layout(2, 2);
    ChannelSample s = random_users(rng, 3);
    const Problem problem(full_codebook(), phys(), g, {s});
    SolverState state = problem.initial_state(g.azimuths());
    state.selection.set(0, 0, 1, 17);
    state.selection.set(0, 1, 0, 100);
    const double got = objective(problem, state);
    const double want = oracle_rate(full_codebook(), phys(), g, g.azimuths(), s, state.selection, 0);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::isfinite(got));
    CHECK(got >= 0.0);

    const Problem empty(full_codebook(), phys(), g, {ChannelSample{}, ChannelSample{1, {}}});
    CHECK(objective(empty, empty.initial_state(g.azimuths())) == 0.0);
}

TEST_CASE("position objective with cached Gram")
{
    std::mt19937_64 rng(2);
    const auto g = layout(3, 4);
    std::vector<ChannelSample> samples{random_users(rng, 4), random_users(rng, 6)};
    const Problem problem(full_codebook(), phys(), g, samples);
    SolverState state = problem.initial_state(g.azimuths());
    state.selection.set(1, 2, 3, 40);
    const ArrayPositionObjective f(problem, state, 1);
    for (double phi : {-0.3, 0.0, 0.5, 2.0})
    {
        auto az = state.azimuths;
        az[1] = phi;
        CHECK(f(phi) == doctest::Approx(problem.objective(az, state.selection)).epsilon(1e-11));
    }
}

TEST_CASE("gradient")
{
    const auto g = layout(1, 1);
    SUBCASE("mirror-symmetric users give zero gradient")
    {
        const double phi0 = g.azimuth(0);
        const Vec3 n = rail_normal(phi0);
        const Vec3 t(-std::sin(phi0), std::cos(phi0), 0.0);
        ChannelSample s{0, {UserGeom::from_position(80.0 * n + 25.0 * t), UserGeom::from_position(80.0 * n - 25.0 * t)}};
        const Problem problem(full_codebook(), phys(), g, {s});
        const SolverState state = problem.initial_state(g.azimuths());
        CHECK(std::abs(grad_position(problem, state, 0, 1e-4)) < 1e-6);
    }
    SUBCASE("sign predicts ascent and refines")
    {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        int checked = 0;
        for (int i = 0; i < 50; ++i)
        {
            ChannelSample s = random_users(rng, 3);
            const Problem problem(full_codebook(), phys(), g, {s});
            // Start roughly facing the first user so the gradient is not buried in the side lobes.
            const Vec3 dir = s.users[0].pointing;
            SolverState state = problem.initial_state({wrap_angle(std::atan2(dir.y(), dir.x()) + u(rng))});
            const double gr = grad_position(problem, state, 0, 1e-4);
            const double half = grad_position(problem, state, 0, 5e-5);
            if (std::abs(gr) < 1e-6)
                continue;
            ++checked;
            const ArrayPositionObjective f(problem, state, 0);
            const double phi = state.azimuths[0];
            CHECK(f(phi + 1e-6 * (gr > 0 ? 1 : -1)) >= f(phi));
            CHECK(std::abs(half - gr) <= 1e-3 * std::abs(gr));
        }
        CHECK(checked > 40);
    }
}

TEST_CASE("position inner loop")
{
    std::mt19937_64 rng(5);
    const auto g = layout(4, 2);
    std::vector<ChannelSample> samples{random_users(rng, 5), random_users(rng, 5), random_users(rng, 5)};
    const Problem problem(full_codebook(), phys(), g, samples);
    OptimizerConfig cfg;

    SolverState state = problem.initial_state(g.azimuths());
    for (int b = 0; b < 4; ++b)
    {
        const double before = objective(problem, state);
        const double after = position_inner_loop(problem, state, b, cfg);
        CHECK(after >= before);
        CHECK(after == doctest::Approx(objective(problem, state)).epsilon(1e-12));
        CHECK(is_feasible(state.azimuths, g.min_separation()));
    }

    // A user-free problem has zero gradient everywhere: nothing moves.
    const Problem flat(full_codebook(), phys(), g, {ChannelSample{}});
    SolverState still = flat.initial_state(g.azimuths());
    position_inner_loop(flat, still, 2, cfg);
    CHECK(still.azimuths == g.azimuths());
    CHECK(still.work.position_evaluations == 4);
}

TEST_CASE("position block")
{
    std::mt19937_64 rng(6);
    const auto g = layout(5, 1);
    std::vector<ChannelSample> samples{random_users(rng, 4), random_users(rng, 7)};
    const Problem problem(full_codebook(), phys(), g, samples);
    OptimizerConfig cfg;
    SolverState state = problem.initial_state(g.azimuths());
    const double start = objective(problem, state);
    position_block(problem, state, cfg);
    REQUIRE(state.trace.size() == static_cast<std::size_t>(cfg.max_outer_position * 5));
    double prev = start;
    for (const auto &e : state.trace)
    {
        CHECK(e.block == BlockKind::Position);
        CHECK(e.objective >= prev - 1e-12);
        prev = e.objective;
    }
    CHECK(is_feasible(state.azimuths, g.min_separation()));

    cfg.max_outer_position = 0;
    SolverState idle = problem.initial_state(g.azimuths());
    position_block(problem, idle, cfg);
    CHECK(idle.azimuths == g.azimuths());
    CHECK(idle.trace.empty());
}

TEST_CASE("greedy antenna selection")
{
    SUBCASE("matches exhaustive search")
    {
        const PatternCodebook &cb = nine_mode_codebook();
        REQUIRE(cb.size() == 9);
        std::mt19937_64 rng(14);
        const auto g = layout(1, 1);
        for (int trial = 0; trial < 30; ++trial)
        {
            const Problem problem(cb, phys(), g, {random_users(rng, 2)});
            SolverState state = problem.initial_state(g.azimuths());
            int best = 0;
            double best_rate = -1.0;
            for (int p = 0; p < 9; ++p)
            {
                state.selection.set(0, 0, 0, p);
                const double r = problem.sample_rate(state.azimuths, state.selection, 0);
                if (r > best_rate * (1 + 1e-12))
                {
                    best_rate = r;
                    best = p;
                }
            }
            state.selection.set(0, 0, 0, cb.default_mode());
            const int got = greedy_antenna_select(problem, state, 0, 0, 0);
            CHECK(problem.sample_rate(state.azimuths, state.selection, 0) ==
                  doctest::Approx(best_rate).epsilon(1e-10));
            if (got != best)
                CHECK(problem.sample_rate(state.azimuths, state.selection, 0) >= best_rate * (1 - 1e-12));
        }
    }
    SUBCASE("single mode")
    {
        const PatternCodebook one = full_codebook().subset({full_codebook().default_mode()});
        const auto g = layout(1, 1);
        std::mt19937_64 rng(1);
        const Problem problem(one, phys(), g, {random_users(rng, 3)});
        SolverState state = problem.initial_state(g.azimuths());
        CHECK(greedy_antenna_select(problem, state, 0, 0, 0) == 0);
    }
    SUBCASE("boresight user keeps the boresight mode")
    {
        const auto g = layout(1, 1);
        ChannelSample s{0, {UserGeom::from_position(90.0 * rail_normal(g.azimuth(0)))}};
        const Problem problem(full_codebook(), phys(), g, {s});
        SolverState state = problem.initial_state(g.azimuths(), 0);
        CHECK(greedy_antenna_select(problem, state, 0, 0, 0) == full_codebook().default_mode());
    }
    SUBCASE("steered user picks the steer point")
    {
        const auto g = layout(1, 1);
        const Mode &m = full_codebook().mode(20);
        // Build the global direction whose local angles equal the steer point of mode 20.
        const Vec3 local(-std::sin(m.steer_elevation_rad), std::cos(m.steer_elevation_rad) * std::sin(m.steer_azimuth_rad),
                         std::cos(m.steer_elevation_rad) * std::cos(m.steer_azimuth_rad));
        const Vec3 f = rotation_matrix(g.azimuth(0)) * local;
        ChannelSample s{0, {UserGeom::from_position(70.0 * f)}};
        const Problem problem(full_codebook(), phys(), g, {s});
        SolverState state = problem.initial_state(g.azimuths());
        const int got = greedy_antenna_select(problem, state, 0, 0, 0);
        // Offsets differ across modes, so the winner has the largest in-direction gain.
        std::vector<double> gains;
        full_codebook().gains_linear(local_pointing(g.azimuth(0), f), gains);
        CHECK(gains[static_cast<std::size_t>(got)] == doctest::Approx(*std::max_element(gains.begin(), gains.end())));
    }
    SUBCASE("empty sample keeps the incumbent")
    {
        const auto g = layout(2, 2);
        const Problem problem(full_codebook(), phys(), g, {ChannelSample{}});
        SolverState state = problem.initial_state(g.azimuths(), 33);
        CHECK(greedy_antenna_select(problem, state, 1, 1, 0) == 33);
        pattern_block(problem, state, OptimizerConfig{});
        for (int b = 0; b < 2; ++b)
            for (int n = 0; n < 2; ++n)
                CHECK(state.selection.mode(0, b, n) == 33);
    }
}

TEST_CASE("pattern block")
{
    std::mt19937_64 rng(8);
    const auto g = layout(3, 2);
    std::vector<ChannelSample> samples;
    for (int s = 0; s < 4; ++s)
        samples.push_back(random_users(rng, 2 + s));
    const Problem problem(full_codebook(), phys(), g, samples, 2);
    SolverState state = problem.initial_state(g.azimuths());
    std::vector<double> before;
    for (int s = 0; s < 4; ++s)
        before.push_back(problem.sample_rate(state.azimuths, state.selection, s));
    OptimizerConfig cfg;
    pattern_block(problem, state, cfg);
    for (int s = 0; s < 4; ++s)
        CHECK(problem.sample_rate(state.azimuths, state.selection, s) >= before[static_cast<std::size_t>(s)] - 1e-12);
    CHECK(state.trace.size() == static_cast<std::size_t>(cfg.max_pattern_sweeps * 3));
    for (std::size_t i = 1; i < state.trace.size(); ++i)
        CHECK(state.trace[i].objective >= state.trace[i - 1].objective - 1e-12);
    CHECK(state.trace.back().objective == doctest::Approx(objective(problem, state)).epsilon(1e-10));
    for (int s = 0; s < 4; ++s)
        for (int b = 0; b < 3; ++b)
            CHECK(is_one_hot(state.selection.binary(s, b), full_codebook().size(), 2));

    // Thread count does not change the result.
    const Problem serial(full_codebook(), phys(), g, samples, 1);
    SolverState other = serial.initial_state(g.azimuths());
    pattern_block(serial, other, cfg);
    CHECK(other.selection == state.selection);
}

TEST_CASE("solve")
{
    std::mt19937_64 rng(10);
    const auto g = layout(4, 2);
    std::vector<ChannelSample> samples;
    for (int s = 0; s < 3; ++s)
        samples.push_back(random_users(rng, 5));
    const Problem problem(full_codebook(), phys(), g, samples);
    OptimizerConfig cfg;
    cfg.initial_pattern_pass = false;

    const SolverState a = solve(problem, problem.initial_state(g.azimuths()), cfg);
    const SolverState b = solve(problem, problem.initial_state(g.azimuths()), cfg);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        CHECK(a.trace[i].objective == b.trace[i].objective);
    CHECK(a.azimuths == b.azimuths);

    CHECK(a.trace.front().block == BlockKind::Init);
    // Positions first, then patterns, each cycle.
    CHECK(a.trace[1].block == BlockKind::Position);
    CHECK(a.trace[1 + 3 * 4].block == BlockKind::Pattern);
    for (std::size_t i = 1; i < a.trace.size(); ++i)
        CHECK(a.trace[i].objective >= a.trace[i - 1].objective - cfg.eps_threshold);
    CHECK(a.cycle_objectives.back() > a.trace.front().objective);
    CHECK(is_feasible(a.azimuths, g.min_separation()));

    // Work bound: one start value, two probes and one candidate per inner iteration, plus backtracks.
    const auto bound = static_cast<std::uint64_t>(a.cycles * cfg.max_outer_position * 4) *
                           static_cast<std::uint64_t>(1 + 3 * cfg.max_inner_position) +
                       a.work.backtracks;
    CHECK(a.work.position_evaluations <= bound);
    CHECK(a.work.pattern_evaluations <=
          static_cast<std::uint64_t>(a.cycles * cfg.max_pattern_sweeps * 3 * 4 * 2 * full_codebook().size()));

    auto crowded = g.azimuths();
    crowded[1] = crowded[0] + 0.01;
    CHECK_THROWS_AS(solve(problem, problem.initial_state(crowded), cfg), InfeasibleError);
}

TEST_CASE("initial pattern pass")
{
    std::mt19937_64 rng(10);
    const auto g = layout(4, 2);
    std::vector<ChannelSample> samples{random_users(rng, 5), random_users(rng, 4)};
    const Problem problem(full_codebook(), phys(), g, samples);
    OptimizerConfig cfg;
    const SolverState st = solve(problem, problem.initial_state(g.azimuths()), cfg);
    REQUIRE(st.trace.size() > 1 + 3 * 4);
    for (int i = 1; i <= 3 * 4; ++i)
    {
        CHECK(st.trace[static_cast<std::size_t>(i)].cycle == 0);
        CHECK(st.trace[static_cast<std::size_t>(i)].block == BlockKind::Pattern);
    }
    CHECK(st.trace[1 + 3 * 4].cycle == 1);
    CHECK(st.trace[1 + 3 * 4].block == BlockKind::Position);
}
