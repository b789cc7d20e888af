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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "railbs/channel.hpp"
#include "railbs/geometry.hpp"
#include "railbs/radiation.hpp"

namespace railbs
{

struct OptimizerConfig
{
    double eps_threshold = 5e-4;
    int max_inner_position = 50;
    int max_outer_position = 3;
    int max_pattern_sweeps = 3;
    int max_cycles = 2;
    double eta_init = 0.1;        // rad per (bit/s/Hz per rad)
    double backtrack_factor = 0.5;
    double armijo_coeff = 1e-4;
    double fd_step = 1e-4;        // rad
    double min_step = 1e-12;      // backtracking floor
    bool optimize_positions = true;
    bool optimize_patterns = true;
    // One pattern block at the starting positions before the first cycle
    // (recorded as cycle 0). Only used when both blocks are enabled.
    bool initial_pattern_pass = true;

    void validate() const;
};

enum class BlockKind
{
    Init,
    Position,
    Pattern,
};

std::string_view to_string(BlockKind kind);

struct TraceEntry
{
    int cycle;
    BlockKind block;
    int index;     // array for both blocks, -1 for the initial entry
    int iteration; // outer position pass or pattern sweep, 1-based
    double objective;
};

struct WorkCounters
{
    std::uint64_t position_evaluations = 0; // full Monte Carlo objective evaluations
    std::uint64_t backtracks = 0;
    std::uint64_t pattern_evaluations = 0; // per-sample candidate evaluations
};

struct SolverState
{
    std::vector<double> azimuths;
    SelectionState selection;
    std::vector<TraceEntry> trace;
    std::vector<double> cycle_objectives;
    int cycles = 0;
    WorkCounters work;
};

/// Everything the objective depends on apart from the decision variables:
/// codebook, physical constants, array layout and the Monte Carlo samples.
/// The codebook must outlive the problem.
class Problem
{
public:
    Problem(const PatternCodebook &codebook, const PhysicalConfig &phys, StationGeometry layout,
            std::vector<ChannelSample> samples, unsigned threads = 1);

    const PatternCodebook &codebook() const { return *codebook_; }
    const PhysicalConfig &physical() const { return phys_; }
    const StationGeometry &layout() const { return layout_; }
    const std::vector<ChannelSample> &samples() const { return samples_; }
    int sample_count() const { return static_cast<int>(samples_.size()); }
    int array_count() const { return layout_.array_count(); }
    int antennas() const { return layout_.antennas_per_array(); }
    unsigned threads() const { return threads_; }

    // Sum-rate of one sample and the sample mean.
    double sample_rate(std::span<const double> azimuths, const SelectionState &selection, int s) const;
    double objective(std::span<const double> azimuths, const SelectionState &selection) const;

    // Feasible start with every antenna on `mode` (boresight by default).
    SolverState initial_state(std::vector<double> azimuths, int mode = -1) const;

private:
    const PatternCodebook *codebook_;
    PhysicalConfig phys_;
    StationGeometry layout_;
    std::vector<ChannelSample> samples_;
    unsigned threads_;
};

double objective(const Problem &problem, const SolverState &state);

// Objective as a function of one array's azimuth, others and selection fixed.
// Caches the other arrays' Gram contribution per sample.
class ArrayPositionObjective
{
public:
    ArrayPositionObjective(const Problem &problem, const SolverState &state, int b);
    double operator()(double phi) const;

private:
    const Problem *problem_;
    const SelectionState *selection_;
    int b_;
    std::vector<Eigen::MatrixXcd> others_; // (p / sigma^2) sum over other arrays of H_j^H H_j
};

// Central difference of the objective in phi_b. Probe points are not projected.
double grad_position(const Problem &problem, const SolverState &state, int b, double h);

// Projected gradient ascent with Armijo backtracking on phi_b. Returns the
// accepted objective value; state.azimuths[b] holds the new position.
double position_inner_loop(const Problem &problem, SolverState &state, int b, const OptimizerConfig &cfg);

void position_block(const Problem &problem, SolverState &state, const OptimizerConfig &cfg, int cycle = 1);

// Best mode for antenna n of array b in sample s with everything else fixed.
// Ties keep the incumbent, otherwise go to the smallest index. Writes the
// winner into state.selection and returns it.
int greedy_antenna_select(const Problem &problem, SolverState &state, int b, int n, int s);

void pattern_block(const Problem &problem, SolverState &state, const OptimizerConfig &cfg, int cycle = 1);

// Alternates the two blocks until the cycle cap or the relative improvement
// falls to eps_threshold. Throws InfeasibleError on an infeasible start.
SolverState solve(const Problem &problem, SolverState initial, const OptimizerConfig &cfg);

} // namespace railbs
