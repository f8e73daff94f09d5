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

#ifndef DMIMO_CHANNEL_HPP
#define DMIMO_CHANNEL_HPP

#include "dmimo/geometry.hpp"
#include "dmimo/rate.hpp"

#include <cstdint>
#include <vector>

namespace dmimo
{

struct ChannelParams
{
    std::size_t N = 64;      // total antennas, split evenly over the n sites
    std::size_t m = 1;       // users
    std::size_t trials = 200;
    std::uint64_t seed = 1;

    void validate(std::size_t n) const;
};

struct ZfResult
{
    std::vector<double> mean;      // per-user mean ZF rate over kept trials
    std::vector<double> std_error;
    std::vector<double> limit;     // rate_at_point for each user
    std::size_t kept = 0;
    std::size_t discarded = 0;     // trials with a singular Gram matrix
    // trial_rates[t * m + j]; discarded trials are omitted.
    std::vector<double> trial_rates;
    // Maximum-ratio rate per kept trial, only for a single user.
    std::vector<double> mr_rates;
};

// Zero-forcing uplink rates for users at fixed locations under Rayleigh fading
// with N / n colocated antennas per site.
ZfResult zf_rate_monte_carlo(const Deployment &x, const std::vector<Point> &users, const RateParams &p,
                             const ChannelParams &c);

// (1/N) sum over all N antennas of the gain variance seen by user u.
double limit_gain_grouped(const Deployment &x, std::span<const double> u, double r, std::size_t N);
// (1/n) sum over sites of ||x_i - u||^(-r).
double limit_gain(const Deployment &x, std::span<const double> u, double r);

} // namespace dmimo

#endif
