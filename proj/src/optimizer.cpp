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

#include "railbs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "railbs/errors.hpp"
#include "railbs/parallel.hpp"

namespace railbs
{

void OptimizerConfig::validate() const
{
    if (!(eps_threshold > 0.0))
        throw ConfigError("optimizer.eps_threshold must be positive");
    if (max_inner_position < 1 || max_outer_position < 1 || max_pattern_sweeps < 1 || max_cycles < 1)
        throw ConfigError("optimizer iteration caps must be at least 1");
    if (!(eta_init > 0.0))
        throw ConfigError("optimizer.eta_init must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw ConfigError("optimizer.backtrack_factor must lie in (0, 1)");
    if (!(armijo_coeff > 0.0 && armijo_coeff < 1.0))
        throw ConfigError("optimizer.armijo_coeff must lie in (0, 1)");
    if (!(fd_step > 0.0))
        throw ConfigError("optimizer.fd_step must be positive");
    if (!(min_step > 0.0))
        throw ConfigError("optimizer.min_step must be positive");
}

std::string_view to_string(BlockKind kind)
{
    switch (kind)
    {
    case BlockKind::Init:
        return "init";
    case BlockKind::Position:
        return "position";
    case BlockKind::Pattern:
        return "pattern";
    }
    return "unknown";
}

Problem::Problem(const PatternCodebook &codebook, const PhysicalConfig &phys, StationGeometry layout,
                 std::vector<ChannelSample> samples, unsigned threads)
    : codebook_(&codebook), phys_(phys), layout_(std::move(layout)), samples_(std::move(samples)),
      threads_(std::max(1u, threads))
{
    phys_.validate();
    if (samples_.empty())
        throw ConfigError("problem needs at least one channel sample");
}

double Problem::sample_rate(std::span<const double> azimuths, const SelectionState &selection, int s) const
{
    const auto &sample = samples_[static_cast<std::size_t>(s)];
    return sum_rate(phys_, channel_matrix(*codebook_, phys_, layout_, azimuths, sample, selection, s));
}

double Problem::objective(std::span<const double> azimuths, const SelectionState &selection) const
{
    if (selection.samples() != sample_count() || selection.arrays() != array_count() ||
        selection.antennas() != antennas())
        throw std::invalid_argument("objective: selection does not match the problem dimensions");
    std::vector<double> rates(samples_.size());
    parallel_for(samples_.size(), threads_,
                 [&](std::size_t s) { rates[s] = sample_rate(azimuths, selection, static_cast<int>(s)); });
    double total = 0.0;
    for (double r : rates)
        total += r;
    return total / static_cast<double>(rates.size());
}

SolverState Problem::initial_state(std::vector<double> azimuths, int mode) const
{
    if (static_cast<int>(azimuths.size()) != array_count())
        throw std::invalid_argument("initial_state: one azimuth per array required");
    for (double &a : azimuths)
        a = wrap_angle(a);
    if (!is_feasible(azimuths, layout_.min_separation()))
        throw InfeasibleError("initial_state: azimuths violate the minimum separation");
    SolverState state;
    state.azimuths = std::move(azimuths);
    state.selection = SelectionState(sample_count(), array_count(), antennas(), codebook_->size(),
                                     mode < 0 ? codebook_->default_mode() : mode);
    return state;
}

double objective(const Problem &problem, const SolverState &state)
{
    return problem.objective(state.azimuths, state.selection);
}

namespace
{

double snr_scale(const PhysicalConfig &phys)
{
    return std::sqrt(phys.tx_power_w / phys.noise_power_w);
}

Eigen::MatrixXcd gram(const Eigen::MatrixXcd &h)
{
    Eigen::MatrixXcd g(h.cols(), h.cols());
    g.setZero();
    g.selfadjointView<Eigen::Lower>().rankUpdate(h.adjoint());
    return g.selfadjointView<Eigen::Lower>();
}

} // namespace

ArrayPositionObjective::ArrayPositionObjective(const Problem &problem, const SolverState &state, int b)
    : problem_(&problem), selection_(&state.selection), b_(b)
{
    if (b < 0 || b >= problem.array_count())
        throw std::out_of_range("array index out of range");
    const double scale = snr_scale(problem.physical());
    const int n_ant = problem.antennas();
    others_.resize(problem.samples().size());
    parallel_for(others_.size(), problem.threads(), [&](std::size_t s) {
        Eigen::MatrixXcd h = scale * channel_matrix(problem.codebook(), problem.physical(), problem.layout(),
                                                    state.azimuths, problem.samples()[s], state.selection,
                                                    static_cast<int>(s));
        h.middleRows(static_cast<Eigen::Index>(b) * n_ant, n_ant).setZero();
        others_[s] = gram(h);
    });
}

double ArrayPositionObjective::operator()(double phi) const
{
    const double scale = snr_scale(problem_->physical());
    std::vector<double> rates(others_.size());
    parallel_for(others_.size(), problem_->threads(), [&](std::size_t s) {
        const auto &sample = problem_->samples()[s];
        if (sample.users.empty())
        {
            rates[s] = 0.0;
            return;
        }
        const Eigen::MatrixXcd blk =
            scale * array_channel_block(problem_->codebook(), problem_->physical(), problem_->layout(), phi, sample,
                                        selection_->array_modes(static_cast<int>(s), b_));
        rates[s] = std::max(0.0, log2det_identity_plus(others_[s] + gram(blk)));
    });
    double total = 0.0;
    for (double r : rates)
        total += r;
    return total / static_cast<double>(rates.size());
}

double grad_position(const Problem &problem, const SolverState &state, int b, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("grad_position: step must be positive");
    const ArrayPositionObjective f(problem, state, b);
    const double phi = state.azimuths[static_cast<std::size_t>(b)];
    return (f(phi + h) - f(phi - h)) / (2.0 * h);
}

double position_inner_loop(const Problem &problem, SolverState &state, int b, const OptimizerConfig &cfg)
{
    const auto arcs = feasible_arcs(b, state.azimuths, problem.layout().min_separation());
    const ArrayPositionObjective f(problem, state, b);
    auto evaluate = [&](double phi) {
        ++state.work.position_evaluations;
        return f(phi);
    };

    double phi = state.azimuths[static_cast<std::size_t>(b)];
    double value = evaluate(phi);
    const double h = cfg.fd_step;

    for (int t = 1; t <= cfg.max_inner_position; ++t)
    {
        const double grad = (evaluate(phi + h) - evaluate(phi - h)) / (2.0 * h);

        double eta = cfg.eta_init;
        double candidate = phi;
        double candidate_value = value;
        bool accepted = false;
        while (eta >= cfg.min_step)
        {
            candidate = project_to_feasible(phi + eta * grad, arcs);
            candidate_value = evaluate(candidate);
            const double displacement = wrap_angle(candidate - phi);
            if (candidate_value - value >= cfg.armijo_coeff * eta * grad * displacement)
            {
                accepted = true;
                break;
            }
            eta *= cfg.backtrack_factor;
            ++state.work.backtracks;
        }
        // A projected step can satisfy the test with a negative displacement
        // product; such points are not committed.
        if (!accepted || candidate_value < value)
            break;

        const double change = candidate_value - value;
        phi = candidate;
        value = candidate_value;
        if (std::abs(change) <= cfg.eps_threshold)
            break;
    }

    state.azimuths[static_cast<std::size_t>(b)] = phi;
    return value;
}

void position_block(const Problem &problem, SolverState &state, const OptimizerConfig &cfg, int cycle)
{
    for (int pass = 1; pass <= cfg.max_outer_position; ++pass)
        for (int b = 0; b < problem.array_count(); ++b)
        {
            const double value = position_inner_loop(problem, state, b, cfg);
            state.trace.push_back(TraceEntry{cycle, BlockKind::Position, b, pass, value});
        }
}

namespace
{

// Per-sample data for the greedy sweep: unit-gain channel rows, the square
// root of every mode's gain towards every user, and the current channel.
struct SampleWorkspace
{
    Eigen::MatrixXcd base;   // NB x K, sqrt(p v_k / sigma^2) * steering phase
    std::vector<double> amp; // (b K + k) P + p -> sqrt(linear gain)
    Eigen::MatrixXcd h;      // NB x K scaled channel for the current selection
    int users = 0;
    int modes = 0;
};

SampleWorkspace build_workspace(const Problem &problem, std::span<const double> azimuths,
                                const SelectionState &selection, int s)
{
    const auto &sample = problem.samples()[static_cast<std::size_t>(s)];
    const auto &phys = problem.physical();
    const auto &codebook = problem.codebook();
    const int n_ant = problem.antennas();
    const int arrays = problem.array_count();
    const double scale = snr_scale(phys);

    SampleWorkspace ws;
    ws.users = static_cast<int>(sample.users.size());
    ws.modes = codebook.size();
    ws.base.resize(static_cast<Eigen::Index>(n_ant) * arrays, ws.users);
    ws.amp.resize(static_cast<std::size_t>(arrays) * static_cast<std::size_t>(ws.users) *
                  static_cast<std::size_t>(ws.modes));
    ws.h.resize(ws.base.rows(), ws.base.cols());

    std::vector<double> gains;
    for (int b = 0; b < arrays; ++b)
    {
        const double phi = azimuths[static_cast<std::size_t>(b)];
        Eigen::MatrixXcd steer = steering_block(problem.layout(), phi, sample, phys.wavelength_m);
        for (int k = 0; k < ws.users; ++k)
        {
            const UserGeom &u = sample.users[static_cast<std::size_t>(k)];
            steer.col(k) *= scale * std::sqrt(phys.power_gain(u.distance_m));
            codebook.gains_linear(local_pointing(phi, u.pointing), gains);
            double *dst = ws.amp.data() + (static_cast<std::size_t>(b) * static_cast<std::size_t>(ws.users) +
                                           static_cast<std::size_t>(k)) *
                                              static_cast<std::size_t>(ws.modes);
            for (int p = 0; p < ws.modes; ++p)
                dst[p] = std::sqrt(gains[static_cast<std::size_t>(p)]);
        }
        ws.base.middleRows(static_cast<Eigen::Index>(b) * n_ant, n_ant) = steer;
        const auto modes = selection.array_modes(s, b);
        for (int n = 0; n < n_ant; ++n)
        {
            const Eigen::Index row = static_cast<Eigen::Index>(b) * n_ant + n;
            for (int k = 0; k < ws.users; ++k)
                ws.h(row, k) = ws.base(row, k) *
                               ws.amp[(static_cast<std::size_t>(b) * static_cast<std::size_t>(ws.users) +
                                       static_cast<std::size_t>(k)) *
                                          static_cast<std::size_t>(ws.modes) +
                                      modes[static_cast<std::size_t>(n)]];
        }
    }
    return ws;
}

double workspace_rate(const SampleWorkspace &ws)
{
    if (ws.users == 0)
        return 0.0;
    return std::max(0.0, log2det_identity_plus(gram(ws.h)));
}

// Greedy update of one antenna via the determinant lemma:
// det(M + v v^H) = det(M) (1 + v^H M^-1 v), with M the matrix without this row.
int greedy_in_workspace(SampleWorkspace &ws, SelectionState &selection, int s, int b, int n, int n_ant,
                        std::uint64_t &evaluations)
{
    const int incumbent = selection.mode(s, b, n);
    if (ws.users == 0)
        return incumbent;

    const Eigen::Index row = static_cast<Eigen::Index>(b) * n_ant + n;
    const Eigen::Index k_users = ws.users;

    Eigen::MatrixXcd without = ws.h;
    without.row(row).setZero();
    Eigen::MatrixXcd m = gram(without);
    m.diagonal().array() += 1.0;
    const Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericalError("greedy selection: factorization failed");

    const std::size_t amp_base = static_cast<std::size_t>(b) * static_cast<std::size_t>(ws.users);
    std::vector<double> quad(static_cast<std::size_t>(ws.modes));
    Eigen::MatrixXcd v(k_users, ws.modes);
    for (int p = 0; p < ws.modes; ++p)
        for (Eigen::Index k = 0; k < k_users; ++k)
            v(k, p) = std::conj(ws.base(row, k)) *
                      ws.amp[(amp_base + static_cast<std::size_t>(k)) * static_cast<std::size_t>(ws.modes) +
                             static_cast<std::size_t>(p)];
    const Eigen::MatrixXcd y = llt.solve(v);
    for (int p = 0; p < ws.modes; ++p)
        quad[static_cast<std::size_t>(p)] = std::max(0.0, v.col(p).dot(y.col(p)).real());
    evaluations += static_cast<std::uint64_t>(ws.modes);

    const double best = *std::max_element(quad.begin(), quad.end());
    const double tol = 1e-12 * std::max(1.0, best);
    int winner = incumbent;
    if (quad[static_cast<std::size_t>(incumbent)] < best - tol)
    {
        for (int p = 0; p < ws.modes; ++p)
            if (quad[static_cast<std::size_t>(p)] >= best - tol)
            {
                winner = p;
                break;
            }
    }

    if (winner != incumbent)
    {
        selection.set(s, b, n, winner);
        for (Eigen::Index k = 0; k < k_users; ++k)
            ws.h(row, k) = ws.base(row, k) *
                           ws.amp[(amp_base + static_cast<std::size_t>(k)) * static_cast<std::size_t>(ws.modes) +
                                  static_cast<std::size_t>(winner)];
    }
    return winner;
}

} // namespace

int greedy_antenna_select(const Problem &problem, SolverState &state, int b, int n, int s)
{
    if (b < 0 || b >= problem.array_count() || n < 0 || n >= problem.antennas() || s < 0 ||
        s >= problem.sample_count())
        throw std::out_of_range("greedy_antenna_select: index out of range");
    SampleWorkspace ws = build_workspace(problem, state.azimuths, state.selection, s);
    return greedy_in_workspace(ws, state.selection, s, b, n, problem.antennas(), state.work.pattern_evaluations);
}

void pattern_block(const Problem &problem, SolverState &state, const OptimizerConfig &cfg, int cycle)
{
    const auto sample_count = static_cast<std::size_t>(problem.sample_count());
    const int n_ant = problem.antennas();

    std::vector<SampleWorkspace> ws(sample_count);
    std::vector<double> rates(sample_count);
    std::vector<char> active(sample_count);
    parallel_for(sample_count, problem.threads(), [&](std::size_t s) {
        ws[s] = build_workspace(problem, state.azimuths, state.selection, static_cast<int>(s));
        rates[s] = workspace_rate(ws[s]);
        active[s] = ws[s].users > 0;
    });

    std::vector<std::uint64_t> evaluations(sample_count, 0);
    for (int sweep = 1; sweep <= cfg.max_pattern_sweeps; ++sweep)
    {
        const std::vector<double> before = rates;
        for (int b = 0; b < problem.array_count(); ++b)
        {
            parallel_for(sample_count, problem.threads(), [&](std::size_t s) {
                if (!active[s])
                    return;
                for (int n = 0; n < n_ant; ++n)
                    greedy_in_workspace(ws[s], state.selection, static_cast<int>(s), b, n, n_ant, evaluations[s]);
                rates[s] = workspace_rate(ws[s]);
            });
            double total = 0.0;
            for (double r : rates)
                total += r;
            state.trace.push_back(
                TraceEntry{cycle, BlockKind::Pattern, b, sweep, total / static_cast<double>(sample_count)});
        }
        for (std::size_t s = 0; s < sample_count; ++s)
        {
            if (!active[s])
                continue;
            const double rel = (rates[s] - before[s]) / std::max(std::abs(before[s]), 1e-12);
            if (rel <= cfg.eps_threshold)
                active[s] = 0;
        }
    }
    for (std::uint64_t e : evaluations)
        state.work.pattern_evaluations += e;
}

SolverState solve(const Problem &problem, SolverState state, const OptimizerConfig &cfg)
{
    cfg.validate();
    if (static_cast<int>(state.azimuths.size()) != problem.array_count())
        throw std::invalid_argument("solve: one azimuth per array required");
    if (!is_feasible(state.azimuths, problem.layout().min_separation()))
        throw InfeasibleError("solve: initial azimuths violate the minimum separation");

    double previous = objective(problem, state);
    state.trace.push_back(TraceEntry{0, BlockKind::Init, -1, 0, previous});
    if (cfg.initial_pattern_pass && cfg.optimize_positions && cfg.optimize_patterns)
    {
        pattern_block(problem, state, cfg, 0);
        previous = objective(problem, state);
    }

    for (int cycle = 1; cycle <= cfg.max_cycles; ++cycle)
    {
        if (cfg.optimize_positions)
            position_block(problem, state, cfg, cycle);
        if (cfg.optimize_patterns)
            pattern_block(problem, state, cfg, cycle);
        const double value = objective(problem, state);
        state.cycle_objectives.push_back(value);
        state.cycles = cycle;
        const double rel = (value - previous) / std::max(std::abs(previous), 1e-12);
        previous = value;
        if (rel <= cfg.eps_threshold)
            break;
    }
    return state;
}

} // namespace railbs
