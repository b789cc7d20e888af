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

#include "railbs/baselines.hpp"

#include <string>

#include "railbs/errors.hpp"

namespace railbs
{

std::string_view to_string(SchemeKind kind)
{
    switch (kind)
    {
    case SchemeKind::Fpa:
        return "fpa";
    case SchemeKind::PaOnly:
        return "pa_only";
    case SchemeKind::PsOnly:
        return "ps_only";
    case SchemeKind::Hmet:
        return "hmet";
    }
    return "unknown";
}

SchemeKind scheme_from_string(std::string_view name)
{
    if (name == "fpa")
        return SchemeKind::Fpa;
    if (name == "pa_only")
        return SchemeKind::PaOnly;
    if (name == "ps_only")
        return SchemeKind::PsOnly;
    if (name == "hmet")
        return SchemeKind::Hmet;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

OptimizerConfig SchemeSpec::apply(OptimizerConfig cfg) const
{
    cfg.optimize_positions = !positions_frozen;
    cfg.optimize_patterns = !patterns_frozen;
    if (block_iterations > 0)
    {
        if (!positions_frozen)
            cfg.max_outer_position = block_iterations;
        if (!patterns_frozen)
            cfg.max_pattern_sweeps = block_iterations;
    }
    return cfg;
}

void SchemeSpec::validate() const
{
    const bool ok = (kind == SchemeKind::Fpa && positions_frozen && patterns_frozen) ||
                    (kind == SchemeKind::PaOnly && !positions_frozen && patterns_frozen) ||
                    (kind == SchemeKind::PsOnly && positions_frozen && !patterns_frozen) ||
                    (kind == SchemeKind::Hmet && !positions_frozen && !patterns_frozen);
    if (!ok)
        throw ConfigError("scheme '" + std::string(to_string(kind)) + "' has inconsistent frozen flags");
}

std::vector<double> equally_spaced_azimuths(int count)
{
    if (count < 1)
        throw ConfigError("array count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int b = 0; b < count; ++b)
        out[static_cast<std::size_t>(b)] = wrap_angle(kTwoPi * (b + 1) / count - kPi);
    return out;
}

FixedArraySetup make_fpa(int total_antennas, const GeometryParams &layout, const PatternCodebook &codebook,
                         int samples)
{
    if (total_antennas < 3)
        throw ConfigError("FPA needs at least three antennas");
    GeometryParams p = layout;
    p.array_count = 3;
    p.antennas_per_array = total_antennas / 3;
    p.upa_rows.reset();
    p.upa_cols.reset();
    p.azimuths_rad = equally_spaced_azimuths(3);
    StationGeometry geom(p);
    SelectionState selection(samples, 3, p.antennas_per_array, codebook.size(), codebook.default_mode());
    SchemeSpec spec{SchemeKind::Fpa, 3, p.antennas_per_array, true, true, 0};
    return FixedArraySetup{std::move(geom), std::move(selection), spec};
}

SchemeSpec make_pa_only(const StationGeometry &geom, int block_iterations)
{
    return SchemeSpec{SchemeKind::PaOnly, geom.array_count(), geom.antennas_per_array(), false, true,
                      block_iterations};
}

SchemeSpec make_ps_only(int arrays, int antennas_per_array, int block_iterations)
{
    return SchemeSpec{SchemeKind::PsOnly, arrays, antennas_per_array, true, false, block_iterations};
}

SchemeSpec make_hmet(int arrays, int antennas_per_array)
{
    return SchemeSpec{SchemeKind::Hmet, arrays, antennas_per_array, false, false, 0};
}

} // namespace railbs
