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

#include "railbs/experiments.hpp"

#include <chrono>
#include <fstream>

#include "railbs/csv.hpp"
#include "railbs/errors.hpp"
#include "railbs/rng.hpp"

namespace railbs
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

constexpr const char *kVersion = "0.1.0";

void prepare_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

fs::path write_json(const fs::path &path, const json &j)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    return path;
}

json manifest_base(const ExperimentConfig &cfg, const std::string &command)
{
    json m;
    m["tool"] = "railbs";
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = cfg.seed;
    m["config_hash"] = format_hash(config_hash(cfg));
    return m;
}

void finish_run(const ExperimentConfig &cfg, json manifest, std::vector<fs::path> &files)
{
    files.push_back(write_json(cfg.output_dir / "resolved_config.json", config_to_json(cfg)));
    json names = json::array();
    for (const auto &f : files)
        names.push_back(f.filename().string());
    names.push_back("manifest.json");
    manifest["files"] = names;
    files.push_back(write_json(cfg.output_dir / "manifest.json", manifest));
}

json work_json(const WorkCounters &w)
{
    return {{"position_evaluations", w.position_evaluations},
            {"backtracks", w.backtracks},
            {"pattern_evaluations", w.pattern_evaluations}};
}

void write_samples_csv(const fs::path &path, const ExperimentConfig &cfg, const std::vector<ChannelSample> &samples)
{
    CsvWriter csv(path, cfg.seed, config_hash(cfg), {"sample", "user", "region", "x", "y", "z", "d"});
    for (const auto &sample : samples)
        for (std::size_t k = 0; k < sample.users.size(); ++k)
        {
            const UserGeom &u = sample.users[k];
            const Vec3 p = u.position();
            csv.cell(sample.index + 1).cell(static_cast<int>(k) + 1).cell(u.region);
            csv.cell(p.x()).cell(p.y()).cell(p.z()).cell(u.distance_m);
            csv.end_row();
        }
}

} // namespace

SchemeSetup build_scheme(const ExperimentConfig &cfg, const PatternCodebook &codebook, const std::string &name)
{
    const auto at = name.find('@');
    const SchemeKind kind = scheme_from_string(name.substr(0, at));
    const int total = cfg.geometry.array_count * cfg.geometry.antennas_per_array;
    int arrays = cfg.geometry.array_count;
    int antennas = cfg.geometry.antennas_per_array;
    if (at != std::string::npos)
    {
        if (kind == SchemeKind::Fpa)
            throw ConfigError("scheme '" + name + "': fpa has a fixed array count");
        try
        {
            std::size_t used = 0;
            arrays = std::stoi(name.substr(at + 1), &used);
            if (used != name.size() - at - 1)
                throw std::invalid_argument("trailing characters");
        }
        catch (const std::exception &)
        {
            throw ConfigError("scheme '" + name + "': expected <kind>@<arrays>");
        }
        if (arrays < 1 || arrays > total)
            throw ConfigError("scheme '" + name + "': array count out of range");
        antennas = total / arrays;
    }

    const int mode = cfg.init.mode ? *cfg.init.mode - 1 : codebook.default_mode();
    if (mode < 0 || mode >= codebook.size())
        throw ConfigError("init.mode: out of range for the codebook");

    if (kind == SchemeKind::Fpa)
    {
        const GeometryParams layout = cfg.geometry_params(3, 1, equally_spaced_azimuths(3));
        FixedArraySetup fpa = make_fpa(total, layout, codebook, 0);
        return SchemeSetup{name, fpa.spec, std::move(fpa.geometry), fpa.spec.apply(cfg.optimizer),
                           codebook.default_mode()};
    }

    std::vector<double> azimuths = equally_spaced_azimuths(arrays);
    if (kind != SchemeKind::PsOnly && cfg.init.azimuths_rad && static_cast<int>(cfg.init.azimuths_rad->size()) == arrays)
        azimuths = *cfg.init.azimuths_rad;
    StationGeometry geom(cfg.geometry_params(arrays, antennas, azimuths));

    SchemeSpec spec;
    switch (kind)
    {
    case SchemeKind::PaOnly:
        spec = make_pa_only(geom, cfg.baseline_block_iterations);
        break;
    case SchemeKind::PsOnly:
        spec = make_ps_only(arrays, antennas, cfg.baseline_block_iterations);
        break;
    default:
        spec = make_hmet(arrays, antennas);
        break;
    }
    spec.validate();
    const int start_mode = kind == SchemeKind::PaOnly ? codebook.default_mode() : mode;
    return SchemeSetup{name, spec, std::move(geom), spec.apply(cfg.optimizer), start_mode};
}

std::vector<ChannelSample> experiment_samples(const ExperimentConfig &cfg, double sparsity)
{
    const std::uint64_t seed = derive_seed(cfg.seed, "samples", 0);
    if (cfg.scenario.kind == "time_varying")
    {
        const TimeVaryingScenario tv(cfg.time_varying_params(sparsity), cfg.seed);
        return generate_static_samples(tv.distribution(), cfg.scenario.samples, seed);
    }
    return generate_static_samples(cfg.static_scenario(sparsity), cfg.scenario.samples, seed);
}

SchemeRun run_scheme(const ExperimentConfig &cfg, const PatternCodebook &codebook, const std::string &name,
                     const std::vector<ChannelSample> &samples)
{
    SchemeSetup setup = build_scheme(cfg, codebook, name);
    const Problem problem(codebook, cfg.physical_config(), setup.layout, samples, cfg.threads);
    SolverState state = solve(problem, problem.initial_state(setup.layout.azimuths(), setup.initial_mode),
                              setup.optimizer);
    const double value = state.cycle_objectives.empty() ? state.trace.front().objective
                                                        : state.cycle_objectives.back();
    return SchemeRun{std::move(setup), std::move(state), value};
}

ConvergenceResult run_convergence(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                                  const RunOptions &options)
{
    prepare_dir(cfg.output_dir);
    const auto samples = experiment_samples(cfg, cfg.scenario.sparsity);
    ConvergenceResult result{run_scheme(cfg, codebook, cfg.scheme, samples), {}};
    const std::uint64_t hash = config_hash(cfg);
    const SolverState &state = result.run.state;

    {
        CsvWriter csv(cfg.output_dir / "trace.csv", cfg.seed, hash,
                      {"cycle", "block", "array_or_sample", "iteration", "objective_bps_hz"});
        for (const TraceEntry &e : state.trace)
        {
            csv.cell(e.cycle).cell(std::string(to_string(e.block)));
            csv.cell(e.index < 0 ? 0 : e.index + 1).cell(e.iteration).cell(e.objective);
            csv.end_row();
        }
        result.files.push_back(csv.path());
    }
    {
        CsvWriter csv(cfg.output_dir / "positions.csv", cfg.seed, hash, {"array", "azimuth_rad"});
        for (std::size_t b = 0; b < state.azimuths.size(); ++b)
        {
            csv.cell(static_cast<int>(b) + 1).cell(state.azimuths[b]);
            csv.end_row();
        }
        result.files.push_back(csv.path());
    }
    if (options.write_samples)
    {
        write_samples_csv(cfg.output_dir / "samples.csv", cfg, samples);
        result.files.push_back(cfg.output_dir / "samples.csv");
    }

    json manifest = manifest_base(cfg, "converge");
    manifest["scheme"] = cfg.scheme;
    manifest["arrays"] = result.run.setup.layout.array_count();
    manifest["antennas_per_array"] = result.run.setup.layout.antennas_per_array();
    manifest["samples"] = samples.size();
    manifest["cycles"] = state.cycles;
    manifest["initial_objective_bps_hz"] = state.trace.front().objective;
    manifest["final_objective_bps_hz"] = result.run.final_objective;
    manifest["work"] = work_json(state.work);
    finish_run(cfg, manifest, result.files);
    return result;
}

SweepResult run_sparsity_sweep(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                               const RunOptions &options)
{
    prepare_dir(cfg.output_dir);
    SweepResult result;
    for (double eta : cfg.sweep.sparsities)
    {
        const auto samples = experiment_samples(cfg, eta);
        for (const auto &name : cfg.sweep.schemes)
        {
            const auto start = std::chrono::steady_clock::now();
            const SchemeRun run = run_scheme(cfg, codebook, name, samples);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            result.points.push_back(SweepPoint{name, eta, run.final_objective, elapsed.count()});
        }
    }

    std::vector<std::string> header{"scheme", "eta", "final_objective_bps_hz"};
    if (options.record_wall_time)
        header.push_back("wall_time_s");
    CsvWriter csv(cfg.output_dir / "sweep.csv", cfg.seed, config_hash(cfg), header);
    for (const auto &p : result.points)
    {
        csv.cell(p.scheme).cell(p.sparsity).cell(p.final_objective);
        if (options.record_wall_time)
            csv.cell(p.wall_time_s);
        csv.end_row();
    }
    result.files.push_back(csv.path());

    json manifest = manifest_base(cfg, "sweep");
    manifest["schemes"] = cfg.sweep.schemes;
    manifest["sparsities"] = cfg.sweep.sparsities;
    manifest["samples_per_point"] = cfg.scenario.samples;
    finish_run(cfg, manifest, result.files);
    return result;
}

TimeVaryingResult run_time_varying(const ExperimentConfig &cfg, const PatternCodebook &codebook,
                                   const RunOptions &)
{
    prepare_dir(cfg.output_dir);
    const std::uint64_t hash = config_hash(cfg);
    const PhysicalConfig phys = cfg.physical_config();
    const TimeVaryingParams params = cfg.time_varying_params(cfg.scenario.sparsity);
    TimeVaryingScenario scenario(params, cfg.seed);

    TimeVaryingResult result;
    result.schemes = cfg.sweep.schemes;
    std::vector<SchemeSetup> setups;
    std::vector<std::vector<double>> azimuths;
    for (const auto &name : result.schemes)
    {
        setups.push_back(build_scheme(cfg, codebook, name));
        azimuths.push_back(setups.back().layout.azimuths());
    }
    const std::size_t scheme_count = setups.size();
    result.rates.assign(scheme_count, {});
    result.positions.assign(scheme_count, {});

    CsvWriter traj(cfg.output_dir / "trajectories.csv", cfg.seed, hash,
                   {"snapshot", "user_id", "region", "x", "y", "z"});
    CsvWriter centers(cfg.output_dir / "hotspot_centers.csv", cfg.seed, hash, {"snapshot", "hotspot", "x", "y", "z"});
    CsvWriter pos(cfg.output_dir / "tv_positions.csv", cfg.seed, hash,
                  {"period", "snapshot", "scheme", "array", "azimuth_rad"});

    const int period = params.snapshots_per_period;
    for (int t = 0; t < cfg.scenario.snapshots; ++t)
    {
        if (t > 0)
            scenario.step();

        if (t % period == 0)
        {
            const int index = t / period;
            const auto samples = generate_static_samples(scenario.distribution(), cfg.scenario.samples,
                                                         derive_seed(cfg.seed, "tv-period", static_cast<std::uint64_t>(index)));
            for (std::size_t i = 0; i < scheme_count; ++i)
            {
                const SchemeSetup &setup = setups[i];
                if (setup.optimizer.optimize_positions)
                {
                    const Problem problem(codebook, phys, setup.layout, samples, cfg.threads);
                    const SolverState state =
                        solve(problem, problem.initial_state(azimuths[i], setup.initial_mode), setup.optimizer);
                    azimuths[i] = state.azimuths;
                }
                result.positions[i].push_back(azimuths[i]);
                for (std::size_t b = 0; b < azimuths[i].size(); ++b)
                {
                    pos.cell(index + 1).cell(t + 1).cell(setup.name).cell(static_cast<int>(b) + 1).cell(azimuths[i][b]);
                    pos.end_row();
                }
            }
        }

        const ChannelSample snapshot = scenario.current();
        for (const TrackedUser &u : scenario.users())
        {
            traj.cell(t + 1).cell(u.id).cell(u.region);
            traj.cell(u.position.x()).cell(u.position.y()).cell(u.position.z());
            traj.end_row();
        }
        for (std::size_t h = 0; h < scenario.centers().size(); ++h)
        {
            const Vec3 &c = scenario.centers()[h];
            centers.cell(t + 1).cell(static_cast<int>(h) + 1).cell(c.x()).cell(c.y()).cell(c.z());
            centers.end_row();
        }

        for (std::size_t i = 0; i < scheme_count; ++i)
        {
            const SchemeSetup &setup = setups[i];
            const Problem problem(codebook, phys, setup.layout, {snapshot}, 1);
            SolverState state = problem.initial_state(azimuths[i], setup.initial_mode);
            if (setup.optimizer.optimize_patterns)
                pattern_block(problem, state, setup.optimizer);
            result.rates[i].push_back(objective(problem, state));
        }
    }

    {
        CsvWriter csv(cfg.output_dir / "tv_rates.csv", cfg.seed, hash, {"snapshot", "scheme", "sum_rate_bps_hz"});
        for (int t = 0; t < cfg.scenario.snapshots; ++t)
            for (std::size_t i = 0; i < scheme_count; ++i)
            {
                csv.cell(t + 1).cell(setups[i].name).cell(result.rates[i][static_cast<std::size_t>(t)]);
                csv.end_row();
            }
        result.files.push_back(csv.path());
    }
    {
        CsvWriter csv(cfg.output_dir / "tv_summary.csv", cfg.seed, hash,
                      {"scheme", "snapshots", "mean_sum_rate_bps_hz"});
        for (std::size_t i = 0; i < scheme_count; ++i)
        {
            double total = 0.0;
            for (double r : result.rates[i])
                total += r;
            const double mean = total / static_cast<double>(cfg.scenario.snapshots);
            result.mean_rates.push_back(mean);
            csv.cell(setups[i].name).cell(cfg.scenario.snapshots).cell(mean);
            csv.end_row();
        }
        result.files.push_back(csv.path());
    }
    result.files.push_back(traj.path());
    result.files.push_back(centers.path());
    result.files.push_back(pos.path());

    result.clipped_positions = scenario.clipped_positions();
    result.emitted_positions = scenario.emitted_positions();
    json manifest = manifest_base(cfg, "timevary");
    manifest["schemes"] = result.schemes;
    manifest["snapshots"] = cfg.scenario.snapshots;
    manifest["snapshots_per_period"] = period;
    manifest["clipped_positions"] = result.clipped_positions;
    manifest["emitted_positions"] = result.emitted_positions;
    finish_run(cfg, manifest, result.files);
    return result;
}

std::vector<fs::path> dump_codebook(const ExperimentConfig &cfg, const PatternCodebook &codebook)
{
    prepare_dir(cfg.output_dir);
    std::vector<fs::path> files;
    {
        CsvWriter csv(cfg.output_dir / "codebook.csv", cfg.seed, config_hash(cfg),
                      {"p", "theta_p_rad", "phi_p_rad", "delta_g_db"});
        for (int p = 0; p < codebook.size(); ++p)
        {
            const Mode &m = codebook.mode(p);
            csv.cell(p + 1).cell(m.steer_elevation_rad).cell(m.steer_azimuth_rad).cell(m.delta_g_db);
            csv.end_row();
        }
        files.push_back(csv.path());
    }
    json manifest = manifest_base(cfg, "dump-codebook");
    manifest["modes"] = codebook.size();
    manifest["default_mode"] = codebook.default_mode() + 1;
    manifest["default_power"] = codebook.default_power();
    finish_run(cfg, manifest, files);
    return files;
}

} // namespace railbs
