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

#include <string>
#include <string_view>
#include <vector>

#include "railbs/channel.hpp"
#include "railbs/geometry.hpp"
#include "railbs/optimizer.hpp"

namespace railbs
{

enum class SchemeKind
{
    Fpa,
    PaOnly,
    PsOnly,
    Hmet,
};

std::string_view to_string(SchemeKind kind);
SchemeKind scheme_from_string(std::string_view name);

struct SchemeSpec
{
    SchemeKind kind = SchemeKind::Hmet;
    int array_count = 0;       // 0 keeps the configured count
    int antennas_per_array = 0; // 0 keeps the configured count
    bool positions_frozen = false;
    bool patterns_frozen = false;
    int block_iterations = 0; // overrides the enabled block's sweep cap when > 0

    // Applies the frozen flags and iteration override.
    OptimizerConfig apply(OptimizerConfig cfg) const;
    void validate() const;
};

// b-th of `count` equally spaced rail positions: 2 pi (b + 1) / count - pi, wrapped.
std::vector<double> equally_spaced_azimuths(int count);

struct FixedArraySetup
{
    StationGeometry geometry;
    SelectionState selection;
    SchemeSpec spec;
};

// Three equally spaced arrays of floor(total / 3) antennas each, every
// antenna on the boresight mode, both blocks disabled. `layout` supplies the
// rail radius, separation and element spacing.
FixedArraySetup make_fpa(int total_antennas, const GeometryParams &layout, const PatternCodebook &codebook,
                         int samples);

SchemeSpec make_pa_only(const StationGeometry &geom, int block_iterations = 0);
SchemeSpec make_ps_only(int arrays, int antennas_per_array, int block_iterations = 0);
SchemeSpec make_hmet(int arrays, int antennas_per_array);

} // namespace railbs
