// SPDX-License-Identifier: Apache-2.0
//
// dmimo - antenna placement toolkit for distributed massive-MIMO uplinks
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

#include "dmimo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dmimo
{

namespace
{
std::atomic<std::size_t> override_count{0};
}

void set_worker_count(std::size_t count)
{
    override_count = count;
}

std::size_t worker_count()
{
    if (const std::size_t forced = override_count.load())
        return forced;
    static const std::size_t count = []
    {
        if (const char *env = std::getenv("DMIMO_THREADS"))
        {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0)
                return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(std::max(1u, std::thread::hardware_concurrency()));
    }();
    return count;
}

namespace
{
// Set on threads already running inside a parallel region; nested calls run serially.
thread_local bool in_region = false;

struct RegionGuard
{
    bool saved = in_region;
    RegionGuard() { in_region = true; }
    ~RegionGuard() { in_region = saved; }
};
} // namespace

void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)> &body)
{
    const std::size_t workers = in_region ? 1 : std::min(worker_count(), chunks);
    if (workers <= 1)
    {
        for (std::size_t c = 0; c < chunks; ++c)
            body(c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&]
    {
        RegionGuard guard;
        for (std::size_t c = next++; c < chunks; c = next++)
        {
            try
            {
                body(c);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

} // namespace dmimo
