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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace railbs
{

// Runs fn(i) for i in [0, count) on up to `threads` workers with static
// contiguous chunks. Results must be written to per-index slots; callers
// reduce them afterwards in index order.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            pool.emplace_back([&, lo, hi] {
                try
                {
                    for (std::size_t i = lo; i < hi; ++i)
                        fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace railbs
