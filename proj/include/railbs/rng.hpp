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
#include <random>
#include <string_view>

namespace railbs
{

using Rng = std::mt19937_64;

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64(std::uint64_t x);

// Child seed for an independent stream: hash of (master, label, index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::string_view label, std::uint64_t index)
{
    return Rng(derive_seed(master, label, index));
}

double uniform01(Rng &rng);

// Poisson variate by CDF inversion of a single uniform, so that for a fixed
// uniform the result is non-decreasing in the mean. Throws on a negative mean.
int poisson_from_uniform(double mean, double u);
int sample_poisson(double mean, Rng &rng);

} // namespace railbs
