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

#include "support.hpp"

#include "dmimo/channel.hpp"
#include "dmimo/geometry.hpp"

#include <doctest.h>

using namespace dmimo;
using dmimo::test::near;

TEST_SUITE("channel")
{

TEST_CASE("params validation")
{
    CHECK_THROWS_AS((ChannelParams{6, 1, 10, 1}.validate(4)), std::invalid_argument);
    CHECK_THROWS_AS((ChannelParams{4, 5, 10, 1}.validate(4)), std::invalid_argument);
    CHECK_THROWS_AS((ChannelParams{4, 1, 0, 1}.validate(4)), std::invalid_argument);
    CHECK_NOTHROW((ChannelParams{8, 2, 10, 1}.validate(4)));
    const Deployment x = test::line({0.0});
    CHECK_THROWS_AS(zf_rate_monte_carlo(x, {Point({0.0})}, {1.0, 2.0, 1, 1}, {16, 1, 10, 1}), std::invalid_argument);
    CHECK_THROWS_AS(zf_rate_monte_carlo(x, {Point({1.0})}, {1.0, 2.0, 1, 1}, {16, 2, 10, 1}), std::invalid_argument);
}

TEST_CASE("single user converges to log 2")
{
    const Deployment x = test::line({0.0});
    const RateParams p{1.0, 2.0, 1, 1};
    double err256 = 0.0;
    for (std::size_t N : {16u, 64u, 256u})
    {
        const ZfResult z = zf_rate_monte_carlo(x, {Point({1.0})}, p, {N, 1, 400, 5});
        CHECK(z.discarded == 0);
        CHECK(z.limit[0] == doctest::Approx(std::log(2.0)));
        err256 = std::abs(z.mean[0] - std::log(2.0)) / std::log(2.0);
    }
    CHECK(err256 <= 0.05);
}

TEST_CASE("zero forcing equals maximum ratio for one user")
{
    const Deployment x = test::line({0.0, 0.4});
    const ZfResult z = zf_rate_monte_carlo(x, {Point({0.9})}, {2.0, 3.0, 2, 1}, {32, 1, 100, 3});
    REQUIRE(z.mr_rates.size() == z.trial_rates.size());
    for (std::size_t t = 0; t < z.mr_rates.size(); ++t)
        CHECK(near(z.trial_rates[t], z.mr_rates[t], 1e-10));
}

TEST_CASE("four users approach the per-user limit")
{
    const Deployment x = square_lattice_deployment(4, Cell::box(1, 1.0));
    const std::vector<Point> users{Point({0.1}), Point({0.35}), Point({0.6}), Point({0.85})};
    const RateParams p{1.0, 4.0, 4, 1};
    const ZfResult z = zf_rate_monte_carlo(x, users, p, {1024, 4, 200, 17});
    CHECK(z.discarded == 0);
    CHECK(z.kept == 200);
    for (std::size_t j = 0; j < 4; ++j)
    {
        CHECK(near(z.limit[j], rate_at_point(users[j], x, p), 1e-14));
        CHECK(std::abs(z.mean[j] - z.limit[j]) <= 0.05 * z.limit[j]);
    }

    // monotone convergence in N
    std::vector<double> previous(4, INFINITY);
    for (std::size_t N : {64u, 256u, 1024u})
    {
        const ZfResult big = zf_rate_monte_carlo(x, users, p, {N, 4, 10000, 17});
        for (std::size_t j = 0; j < 4; ++j)
        {
            const double err = std::abs(big.mean[j] - big.limit[j]);
            CHECK(big.mean[j] < big.limit[j]);
            CHECK(err <= previous[j]);
            previous[j] = err;
        }
    }
}

TEST_CASE("grouped limit equals the per-site average")
{
    const std::vector<Deployment> xs{test::line({0.1, 0.5, 0.7}), test::plane({{0, 0}, {1, 0}, {0.3, 0.8}, {0.5, 0.5}}),
                                     square_lattice_deployment(9, Cell::box(2, 2.0))};
    for (const Deployment &x : xs)
    {
        const std::vector<double> u(x.dim(), 0.37);
        for (std::size_t per : {1u, 3u, 16u})
            CHECK(near(limit_gain_grouped(x, u, 3.0, per * x.size()), limit_gain(x, u, 3.0), 1e-12 * limit_gain(x, u, 3.0)));
    }
    CHECK_THROWS_AS(limit_gain_grouped(test::line({0.1, 0.5}), std::vector<double>{0.2}, 2.0, 3), std::invalid_argument);
}

TEST_CASE("trial results do not depend on the worker count")
{
    const Deployment x = test::line({0.2, 0.8});
    const std::vector<Point> users{Point({0.3}), Point({0.6})};
    const RateParams p{1.0, 2.0, 2, 1};
    const ZfResult a = zf_rate_monte_carlo(x, users, p, {16, 2, 50, 3});
    const ZfResult b = zf_rate_monte_carlo(x, users, p, {16, 2, 50, 3});
    CHECK(a.trial_rates == b.trial_rates);
}

} // TEST_SUITE
