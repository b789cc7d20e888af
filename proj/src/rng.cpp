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

#include "railbs/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace railbs
{

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index)
{
    return splitmix64(splitmix64(master ^ fnv1a64(label)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

double uniform01(Rng &rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int poisson_from_uniform(double mean, double u)
{
    if (!(mean >= 0.0))
        throw std::invalid_argument("poisson: mean must be non-negative");
    if (mean == 0.0)
        return 0;
    // log-space recursion keeps the pmf finite for large means
    const double log_mean = std::log(mean);
    double log_pmf = -mean;
    double cdf = std::exp(log_pmf);
    int k = 0;
    const int cap = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 100.0);
    while (u > cdf && k < cap)
    {
        ++k;
        log_pmf += log_mean - std::log(static_cast<double>(k));
        cdf += std::exp(log_pmf);
    }
    return k;
}

int sample_poisson(double mean, Rng &rng)
{
    return poisson_from_uniform(mean, uniform01(rng));
}

} // namespace railbs
