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

#ifndef DMIMO_RANDOM_HPP
#define DMIMO_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dmimo
{

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: the stream for (seed, stream) is a pure function of
// the pair, so any sample or trial can be regenerated independently of the
// order in which work is scheduled.
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)))
    {
    }

    std::uint64_t next() noexcept { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform on the open interval (0,1).
    double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives an independent seed for a numbered sub-task (restart, trial, ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) noexcept
{
    return mix64(seed * 0xd1b54a32d192ed03ULL + mix64(task));
}

} // namespace dmimo

#endif
