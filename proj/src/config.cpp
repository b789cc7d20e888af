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

#include "railbs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "railbs/baselines.hpp"
#include "railbs/errors.hpp"
#include "railbs/rng.hpp"

namespace railbs
{

using nlohmann::json;

namespace
{

constexpr double kDeg = kPi / 180.0;

// Degrees to nano-degree resolution so a reload reproduces the same radians.
double to_degrees(double rad)
{
    return std::round(rad / kDeg * 1e9) / 1e9;
}

[[noreturn]] void schema_error(const std::string &key, const std::string &what)
{
    throw ConfigError(key + ": " + what, ConfigErrorKind::Schema);
}

[[noreturn]] void value_error(const std::string &key, const std::string &what)
{
    throw ConfigError(key + ": " + what, ConfigErrorKind::Value);
}

// Reads keys of one JSON object and rejects any key that was never requested.
class Section
{
public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            schema_error(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const char *name) const { return path_.empty() ? name : path_ + "." + name; }

    const json *find(const char *name)
    {
        seen_.insert(name);
        auto it = j_.find(name);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const char *name, double &out)
    {
        if (const json *v = find(name))
        {
            if (!v->is_number())
                schema_error(key(name), "expected a number");
            out = v->get<double>();
        }
    }

    void number(const char *name, std::optional<double> &out)
    {
        if (const json *v = find(name))
        {
            if (v->is_null())
                out.reset();
            else if (!v->is_number())
                schema_error(key(name), "expected a number or null");
            else
                out = v->get<double>();
        }
    }

    void integer(const char *name, int &out)
    {
        if (const json *v = find(name))
        {
            if (!v->is_number_integer())
                schema_error(key(name), "expected an integer");
            out = v->get<int>();
        }
    }

    void integer(const char *name, std::optional<int> &out)
    {
        if (const json *v = find(name))
        {
            if (v->is_null())
                out.reset();
            else if (!v->is_number_integer())
                schema_error(key(name), "expected an integer or null");
            else
                out = v->get<int>();
        }
    }

    void text(const char *name, std::string &out)
    {
        if (const json *v = find(name))
        {
            if (!v->is_string())
                schema_error(key(name), "expected a string");
            out = v->get<std::string>();
        }
    }

    void numbers(const char *name, std::vector<double> &out)
    {
        if (const json *v = find(name))
            out = number_list(*v, key(name));
    }

    void finish() const
    {
        for (const auto &item : j_.items())
            if (!seen_.count(item.key()))
                schema_error(key(item.key().c_str()), "unknown key");
    }

    static std::vector<double> number_list(const json &v, const std::string &k)
    {
        if (!v.is_array())
            schema_error(k, "expected an array of numbers");
        std::vector<double> out;
        for (const json &x : v)
        {
            if (!x.is_number())
                schema_error(k, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    static Vec3 vec3(const json &v, const std::string &k)
    {
        const auto xs = number_list(v, k);
        if (xs.size() != 3)
            schema_error(k, "expected three coordinates");
        return {xs[0], xs[1], xs[2]};
    }

private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

json vec3_json(const Vec3 &v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Region region_from_json(const json &j, const std::string &k)
{
    Section s(j, k);
    std::string type;
    s.text("type", type);
    auto vec = [&](const char *name) {
        const json *v = s.find(name);
        if (!v)
            schema_error(s.key(name), "missing");
        return Section::vec3(*v, s.key(name));
    };
    auto scalar = [&](const char *name) {
        double out = std::nan("");
        s.number(name, out);
        if (std::isnan(out))
            schema_error(s.key(name), "missing");
        return out;
    };
    Region r;
    if (type == "cuboid")
        r = Cuboid{vec("center"), vec("size")};
    else if (type == "disk")
        r = HorizontalDisk{vec("center"), scalar("radius")};
    else if (type == "segment")
        r = Segment{vec("a"), vec("b")};
    else if (type == "sphere")
        r = Sphere{vec("center"), scalar("radius")};
    else
        schema_error(s.key("type"), "expected one of cuboid, disk, segment, sphere");
    s.finish();
    try
    {
        validate_region(r);
    }
    catch (const ConfigError &e)
    {
        value_error(k, e.what());
    }
    return r;
}

json region_to_json(const Region &region)
{
    return std::visit(
        [](const auto &r) -> json {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Cuboid>)
                return {{"type", "cuboid"}, {"center", vec3_json(r.center)}, {"size", vec3_json(r.size)}};
            else if constexpr (std::is_same_v<T, HorizontalDisk>)
                return {{"type", "disk"}, {"center", vec3_json(r.center)}, {"radius", r.radius}};
            else if constexpr (std::is_same_v<T, Segment>)
                return {{"type", "segment"}, {"a", vec3_json(r.a)}, {"b", vec3_json(r.b)}};
            else if constexpr (std::is_same_v<T, Sphere>)
                return {{"type", "sphere"}, {"center", vec3_json(r.center)}, {"radius", r.radius}};
            else
                return {{"type", "shell"}, {"r_min_m", r.r_min}, {"r_max_m", r.r_max}};
        },
        region);
}

template <typename Fn>
void check(const std::string &key, Fn &&fn)
{
    try
    {
        fn();
    }
    catch (const ConfigError &e)
    {
        if (e.kind() == ConfigErrorKind::Value && std::string(e.what()).rfind(key, 0) != 0)
            value_error(key, e.what());
        throw;
    }
    catch (const InfeasibleError &e)
    {
        value_error(key, e.what());
    }
}

void validate(const ExperimentConfig &cfg)
{
    const auto &ph = cfg.physical;
    if (!(ph.carrier_hz > 0.0))
        value_error("physical.carrier_hz", "must be positive");
    if (!(ph.tx_power_w > 0.0))
        value_error("physical.tx_power_w", "must be positive");
    if (!std::isfinite(ph.noise_power_dbm))
        value_error("physical.noise_power_dbm", "must be finite");
    if (ph.noise_power_w && !(*ph.noise_power_w > 0.0))
        value_error("physical.noise_power_w", "must be positive");
    if (ph.pathloss_ref && !(*ph.pathloss_ref > 0.0))
        value_error("physical.pathloss_ref", "must be positive");
    if (!(ph.pathloss_exp > 0.0))
        value_error("physical.pathloss_exp", "must be positive");

    const auto &g = cfg.geometry;
    if (!(g.rail_radius_m > 0.0))
        value_error("geometry.rail_radius_m", "must be positive");
    if (g.array_count < 1)
        value_error("geometry.array_count", "must be at least 1");
    if (g.antennas_per_array < 1)
        value_error("geometry.antennas_per_array", "must be at least 1");
    if (g.array_width_m && !(*g.array_width_m > 0.0))
        value_error("geometry.array_width_m", "must be positive");
    if (g.element_spacing_m && !(*g.element_spacing_m > 0.0))
        value_error("geometry.element_spacing_m", "must be positive");
    const double beta = cfg.resolved_min_separation();
    if (!(beta > 0.0 && beta < kPi))
        value_error("geometry.min_separation_rad", "must lie in (0, pi)");
    if (g.array_count * beta > kTwoPi + 1e-12)
        value_error("geometry.array_count", "arrays cannot fit on the rail with this separation");
    check("geometry", [&] {
        StationGeometry(cfg.geometry_params(g.array_count, g.antennas_per_array,
                                            equally_spaced_azimuths(g.array_count)));
    });

    const auto &cb = cfg.codebook;
    check("codebook", [&] { enumerate_modes(cb.theta_max_rad, cb.dtheta_rad, cb.dphi_rad); });
    if (std::abs(cb.theta_max_rad / cb.dtheta_rad - std::round(cb.theta_max_rad / cb.dtheta_rad)) > 1e-9 ||
        std::abs(0.5 * kPi / cb.dphi_rad - std::round(0.5 * kPi / cb.dphi_rad)) > 1e-9)
        value_error("codebook", "steering grid does not contain the boresight mode (0, 0)");
    if (!(cb.theta3db_rad > 0.0))
        value_error("codebook.theta3db_deg", "must be positive");
    if (!(cb.phi3db_rad > 0.0))
        value_error("codebook.phi3db_deg", "must be positive");
    if (!(cb.g_s_db >= 0.0))
        value_error("codebook.g_s_db", "must be non-negative");
    if (!(cb.g_v_db >= 0.0))
        value_error("codebook.g_v_db", "must be non-negative");
    if (!(cb.quadrature_step_rad > 0.0))
        value_error("codebook.quadrature_step_deg", "must be positive");

    const auto &sc = cfg.scenario;
    if (sc.kind != "static" && sc.kind != "time_varying")
        value_error("scenario.kind", "expected \"static\" or \"time_varying\"");
    if (sc.samples < 1)
        value_error("scenario.samples", "must be at least 1");
    if (!(sc.mean_total_users >= 0.0))
        value_error("scenario.mean_total_users", "must be non-negative");
    if (!(sc.sparsity >= 0.0 && sc.sparsity <= 1.0))
        value_error("scenario.sparsity", "must lie in [0, 1]");
    if (sc.snapshots < 1)
        value_error("scenario.time_varying.snapshots", "must be at least 1");
    check("scenario", [&] { cfg.static_scenario(sc.sparsity).validate(); });
    check("scenario.time_varying", [&] { cfg.time_varying_params(sc.sparsity).validate(); });

    check("optimizer", [&] { cfg.optimizer.validate(); });

    check("scheme", [&] { scheme_from_string(cfg.scheme.substr(0, cfg.scheme.find('@'))); });
    if (cfg.baseline_block_iterations < 0)
        value_error("baseline_block_iterations", "must be non-negative");
    for (double eta : cfg.sweep.sparsities)
        if (!(eta >= 0.0 && eta <= 1.0))
            value_error("sweep.sparsities", "entries must lie in [0, 1]");
    for (const auto &name : cfg.sweep.schemes)
        check("sweep.schemes", [&] { scheme_from_string(name.substr(0, name.find('@'))); });

    if (cfg.init.azimuths_rad)
    {
        if (static_cast<int>(cfg.init.azimuths_rad->size()) != g.array_count)
            value_error("init.azimuths_rad", "needs one entry per array");
        if (!is_feasible(*cfg.init.azimuths_rad, beta))
            value_error("init.azimuths_rad", "violates the minimum separation");
    }
    if (cfg.init.mode)
    {
        const auto count = enumerate_modes(cb.theta_max_rad, cb.dtheta_rad, cb.dphi_rad).size();
        if (*cfg.init.mode < 1 || *cfg.init.mode > static_cast<int>(count))
            value_error("init.mode", "must lie in [1, P]");
    }
}

} // namespace

PhysicalConfig PhysicalSettings::resolve() const
{
    const double noise = noise_power_w ? *noise_power_w : 1e-3 * std::pow(10.0, noise_power_dbm / 10.0);
    PhysicalConfig phys = PhysicalConfig::free_space(carrier_hz, tx_power_w, noise);
    if (pathloss_ref)
        phys.pathloss_ref = *pathloss_ref;
    phys.pathloss_exp = pathloss_exp;
    return phys;
}

double ExperimentConfig::resolved_min_separation() const
{
    if (geometry.min_separation_rad)
        return *geometry.min_separation_rad;
    if (geometry.array_width_m)
        return 2.0 * std::atan(*geometry.array_width_m / (2.0 * geometry.rail_radius_m));
    return kPi / 24.0;
}

double ExperimentConfig::resolved_element_spacing() const
{
    if (geometry.element_spacing_m)
        return *geometry.element_spacing_m;
    return 0.5 * kSpeedOfLight / physical.carrier_hz;
}

GeometryParams ExperimentConfig::geometry_params(int arrays, int antennas, std::vector<double> azimuths) const
{
    GeometryParams p;
    p.rail_radius_m = geometry.rail_radius_m;
    p.array_count = arrays;
    p.antennas_per_array = antennas;
    p.min_separation_rad = resolved_min_separation();
    p.element_spacing_m = resolved_element_spacing();
    if (geometry.array_width_m && geometry.min_separation_rad)
        p.array_width_m = geometry.array_width_m;
    if (antennas == geometry.antennas_per_array)
    {
        p.upa_rows = geometry.upa_rows;
        p.upa_cols = geometry.upa_cols;
    }
    p.azimuths_rad = std::move(azimuths);
    return p;
}

StaticScenario ExperimentConfig::static_scenario(double sparsity) const
{
    StaticScenario s;
    s.coverage = scenario.coverage;
    s.hotspots = scenario.hotspots;
    s.mean_total = scenario.mean_total_users;
    s.sparsity = sparsity;
    return s;
}

TimeVaryingParams ExperimentConfig::time_varying_params(double sparsity) const
{
    TimeVaryingParams p = scenario.time_varying;
    p.coverage = scenario.coverage;
    p.mean_total = scenario.mean_total_users;
    p.sparsity = sparsity;
    return p;
}

ExperimentConfig config_from_json(const json &root_json)
{
    ExperimentConfig cfg;
    Section root(root_json, "");

    if (const json *v = root.find("seed"))
    {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
            schema_error("seed", "expected a non-negative integer");
        cfg.seed = v->get<std::uint64_t>();
    }

    if (const json *v = root.find("physical"))
    {
        Section s(*v, "physical");
        s.number("carrier_hz", cfg.physical.carrier_hz);
        s.number("tx_power_w", cfg.physical.tx_power_w);
        s.number("noise_power_dbm", cfg.physical.noise_power_dbm);
        s.number("noise_power_w", cfg.physical.noise_power_w);
        s.number("pathloss_ref", cfg.physical.pathloss_ref);
        s.number("pathloss_exp", cfg.physical.pathloss_exp);
        s.finish();
    }

    if (const json *v = root.find("geometry"))
    {
        Section s(*v, "geometry");
        auto &g = cfg.geometry;
        s.number("rail_radius_m", g.rail_radius_m);
        s.integer("array_count", g.array_count);
        s.integer("antennas_per_array", g.antennas_per_array);
        s.number("min_separation_rad", g.min_separation_rad);
        s.number("array_width_m", g.array_width_m);
        s.number("element_spacing_m", g.element_spacing_m);
        s.integer("upa_rows", g.upa_rows);
        s.integer("upa_cols", g.upa_cols);
        s.finish();
    }

    if (const json *v = root.find("codebook"))
    {
        Section s(*v, "codebook");
        auto &c = cfg.codebook;
        s.number("theta_max_rad", c.theta_max_rad);
        s.number("dtheta_rad", c.dtheta_rad);
        s.number("dphi_rad", c.dphi_rad);
        s.number("g_max_dbi", c.g_max_dbi);
        double theta3 = c.theta3db_rad / kDeg, phi3 = c.phi3db_rad / kDeg, step = c.quadrature_step_rad / kDeg;
        s.number("theta3db_deg", theta3);
        s.number("phi3db_deg", phi3);
        s.number("quadrature_step_deg", step);
        c.theta3db_rad = theta3 * kDeg;
        c.phi3db_rad = phi3 * kDeg;
        c.quadrature_step_rad = step * kDeg;
        s.number("g_s_db", c.g_s_db);
        s.number("g_v_db", c.g_v_db);
        s.finish();
    }

    if (const json *v = root.find("scenario"))
    {
        Section s(*v, "scenario");
        auto &sc = cfg.scenario;
        s.text("kind", sc.kind);
        s.integer("samples", sc.samples);
        s.number("mean_total_users", sc.mean_total_users);
        s.number("sparsity", sc.sparsity);
        if (const json *c = s.find("coverage"))
        {
            Section cs(*c, "scenario.coverage");
            cs.number("r_min_m", sc.coverage.r_min);
            cs.number("r_max_m", sc.coverage.r_max);
            cs.finish();
        }
        if (const json *h = s.find("hotspots"))
        {
            if (!h->is_array())
                schema_error("scenario.hotspots", "expected an array of regions");
            sc.hotspots.clear();
            for (std::size_t i = 0; i < h->size(); ++i)
                sc.hotspots.push_back(region_from_json((*h)[i], "scenario.hotspots[" + std::to_string(i) + "]"));
        }
        if (const json *t = s.find("time_varying"))
        {
            Section ts(*t, "scenario.time_varying");
            auto &tv = sc.time_varying;
            if (const json *centers = ts.find("hotspot_centers"))
            {
                if (!centers->is_array())
                    schema_error("scenario.time_varying.hotspot_centers", "expected an array of points");
                tv.mean_centers.clear();
                for (const json &c : *centers)
                    tv.mean_centers.push_back(Section::vec3(c, "scenario.time_varying.hotspot_centers"));
            }
            ts.number("hotspot_radius_m", tv.hotspot_radius_m);
            ts.number("center_persistence", tv.center_persistence);
            ts.number("center_noise_std_m", tv.center_noise_std_m);
            ts.numbers("survival_probs", tv.survival_probs);
            ts.number("offset_persistence", tv.offset_persistence);
            ts.number("offset_noise_std_m", tv.offset_noise_std_m);
            ts.integer("snapshots", sc.snapshots);
            ts.integer("snapshots_per_period", tv.snapshots_per_period);
            ts.finish();
        }
        s.finish();
    }

    if (const json *v = root.find("optimizer"))
    {
        Section s(*v, "optimizer");
        auto &o = cfg.optimizer;
        s.number("eps_threshold", o.eps_threshold);
        s.integer("max_inner_position", o.max_inner_position);
        s.integer("max_outer_position", o.max_outer_position);
        s.integer("max_pattern_sweeps", o.max_pattern_sweeps);
        s.integer("max_cycles", o.max_cycles);
        s.number("eta_init", o.eta_init);
        s.number("backtrack_factor", o.backtrack_factor);
        s.number("armijo_coeff", o.armijo_coeff);
        s.number("fd_step", o.fd_step);
        s.number("min_step", o.min_step);
        if (const json *flag = s.find("initial_pattern_pass"))
        {
            if (!flag->is_boolean())
                schema_error("optimizer.initial_pattern_pass", "expected a boolean");
            o.initial_pattern_pass = flag->get<bool>();
        }
        s.finish();
    }

    root.text("scheme", cfg.scheme);
    root.integer("baseline_block_iterations", cfg.baseline_block_iterations);

    if (const json *v = root.find("sweep"))
    {
        Section s(*v, "sweep");
        s.numbers("sparsities", cfg.sweep.sparsities);
        if (const json *names = s.find("schemes"))
        {
            if (!names->is_array())
                schema_error("sweep.schemes", "expected an array of scheme names");
            cfg.sweep.schemes.clear();
            for (const json &n : *names)
            {
                if (!n.is_string())
                    schema_error("sweep.schemes", "expected an array of scheme names");
                cfg.sweep.schemes.push_back(n.get<std::string>());
            }
        }
        s.finish();
    }

    if (const json *v = root.find("init"))
    {
        Section s(*v, "init");
        if (const json *a = s.find("azimuths_rad"))
        {
            if (a->is_null())
                cfg.init.azimuths_rad.reset();
            else
                cfg.init.azimuths_rad = Section::number_list(*a, "init.azimuths_rad");
        }
        s.integer("mode", cfg.init.mode);
        s.finish();
    }

    if (const json *v = root.find("output_dir"))
    {
        if (!v->is_string())
            schema_error("output_dir", "expected a string");
        cfg.output_dir = v->get<std::string>();
    }
    if (const json *v = root.find("threads"))
    {
        if (!v->is_number_integer() || v->get<long long>() < 1)
            schema_error("threads", "expected a positive integer");
        cfg.threads = v->get<unsigned>();
    }
    root.finish();

    validate(cfg);
    return cfg;
}

json config_to_json(const ExperimentConfig &cfg)
{
    const auto &g = cfg.geometry;
    const double beta = cfg.resolved_min_separation();
    const auto [rows, cols] = (g.upa_rows && g.upa_cols) ? std::pair{*g.upa_rows, *g.upa_cols}
                                                          : upa_factorization(g.antennas_per_array);
    const PhysicalConfig phys = cfg.physical_config();

    json hotspots = json::array();
    for (const Region &r : cfg.scenario.hotspots)
        hotspots.push_back(region_to_json(r));
    json centers = json::array();
    for (const Vec3 &c : cfg.scenario.time_varying.mean_centers)
        centers.push_back(vec3_json(c));
    const auto &tv = cfg.scenario.time_varying;
    const auto &o = cfg.optimizer;
    const auto &cb = cfg.codebook;

    json j;
    j["seed"] = cfg.seed;
    j["physical"] = {{"carrier_hz", cfg.physical.carrier_hz},
                     {"tx_power_w", cfg.physical.tx_power_w},
                     {"noise_power_dbm", cfg.physical.noise_power_dbm},
                     {"noise_power_w", cfg.physical.noise_power_w ? json(*cfg.physical.noise_power_w) : json(nullptr)},
                     {"pathloss_ref", phys.pathloss_ref},
                     {"pathloss_exp", cfg.physical.pathloss_exp}};
    j["geometry"] = {{"rail_radius_m", g.rail_radius_m},
                     {"array_count", g.array_count},
                     {"antennas_per_array", g.antennas_per_array},
                     {"min_separation_rad", beta},
                     {"array_width_m", g.array_width_m ? *g.array_width_m
                                                       : 2.0 * g.rail_radius_m * std::tan(0.5 * beta)},
                     {"element_spacing_m", cfg.resolved_element_spacing()},
                     {"upa_rows", rows},
                     {"upa_cols", cols}};
    j["codebook"] = {{"theta_max_rad", cb.theta_max_rad},
                     {"dtheta_rad", cb.dtheta_rad},
                     {"dphi_rad", cb.dphi_rad},
                     {"g_max_dbi", cb.g_max_dbi},
                     {"theta3db_deg", to_degrees(cb.theta3db_rad)},
                     {"phi3db_deg", to_degrees(cb.phi3db_rad)},
                     {"g_s_db", cb.g_s_db},
                     {"g_v_db", cb.g_v_db},
                     {"quadrature_step_deg", to_degrees(cb.quadrature_step_rad)}};
    j["scenario"] = {{"kind", cfg.scenario.kind},
                     {"samples", cfg.scenario.samples},
                     {"mean_total_users", cfg.scenario.mean_total_users},
                     {"sparsity", cfg.scenario.sparsity},
                     {"coverage", {{"r_min_m", cfg.scenario.coverage.r_min}, {"r_max_m", cfg.scenario.coverage.r_max}}},
                     {"hotspots", hotspots},
                     {"time_varying",
                      {{"hotspot_centers", centers},
                       {"hotspot_radius_m", tv.hotspot_radius_m},
                       {"center_persistence", tv.center_persistence},
                       {"center_noise_std_m", tv.center_noise_std_m},
                       {"survival_probs", tv.survival_probs},
                       {"offset_persistence", tv.offset_persistence},
                       {"offset_noise_std_m", tv.offset_noise_std_m},
                       {"snapshots", cfg.scenario.snapshots},
                       {"snapshots_per_period", tv.snapshots_per_period}}}};
    j["optimizer"] = {{"eps_threshold", o.eps_threshold},
                      {"max_inner_position", o.max_inner_position},
                      {"max_outer_position", o.max_outer_position},
                      {"max_pattern_sweeps", o.max_pattern_sweeps},
                      {"max_cycles", o.max_cycles},
                      {"eta_init", o.eta_init},
                      {"backtrack_factor", o.backtrack_factor},
                      {"armijo_coeff", o.armijo_coeff},
                      {"fd_step", o.fd_step},
                      {"min_step", o.min_step},
                      {"initial_pattern_pass", o.initial_pattern_pass}};
    j["scheme"] = cfg.scheme;
    j["baseline_block_iterations"] = cfg.baseline_block_iterations;
    j["sweep"] = {{"sparsities", cfg.sweep.sparsities}, {"schemes", cfg.sweep.schemes}};
    j["init"] = {{"azimuths_rad", cfg.init.azimuths_rad ? json(*cfg.init.azimuths_rad) : json(nullptr)},
                 {"mode", cfg.init.mode ? json(*cfg.init.mode) : json(nullptr)}};
    return j;
}

ExperimentConfig parse_config(const std::string &text)
{
    json j;
    try
    {
        j = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config parse error: ") + e.what(), ConfigErrorKind::Parse);
    }
    return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string(), ConfigErrorKind::Parse);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::uint64_t config_hash(const ExperimentConfig &cfg)
{
    return fnv1a64(config_to_json(cfg).dump());
}

} // namespace railbs
