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

#include "dmimo/density.hpp"
#include "dmimo/placement.hpp"

#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include <algorithm>

using namespace dmimo;
using dmimo::test::near;

namespace
{

const UserDensity unit_line = UserDensity::uniform_box(Cell::box(1, 1.0));

OptimizeConfig quick(ObjectiveKind objective, std::size_t restarts = 2)
{
    OptimizeConfig c;
    c.objective = objective;
    c.restarts = restarts;
    c.quadrature.samples = 50000;
    c.tol = 1e-4;
    return c;
}

std::vector<double> midpoints(std::size_t n)
{
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = (2.0 * i + 1.0) / (2.0 * n);
    return m;
}

} // namespace

TEST_SUITE("placement")
{

TEST_CASE("config validation")
{
    OptimizeConfig c;
    CHECK_NOTHROW(c.validate());
    c.restarts = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.shrink = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(objective_from_string("logquant") == ObjectiveKind::logquant);
    CHECK(to_string(ObjectiveKind::rate) == "rate");
    CHECK_THROWS_AS(objective_from_string("mse"), std::invalid_argument);
    CHECK_THROWS_AS(optimize_deployment(unit_line, {1.0, 2.0, 2, 2}, OptimizeConfig{}), std::invalid_argument);
}

TEST_CASE("logquant optimum in d = 1 is the midpoint codebook")
{
    const auto res = optimize_deployment(unit_line, {1.0, 2.0, 4, 1}, quick(ObjectiveKind::logquant));
    CHECK(test::max_abs_diff(res.deployment.sorted().flat(), midpoints(4)) <= 1e-3);
    CHECK(near(res.trace.best().final_value.value, std::log(4.0) + 1.0 + std::log(2.0), 1e-3));
}

TEST_CASE("a single antenna settles at the centre")
{
    const auto res = optimize_deployment(unit_line, {1.0, 2.0, 1, 1}, quick(ObjectiveKind::rate));
    CHECK(near(res.deployment.flat()[0], 0.5, 1e-3));
}

TEST_CASE("ascent dominates its initializers")
{
    const auto f = UserDensity::beta25();
    const RateParams p{1.0, 4.0, 8, 1};
    OptimizeConfig c = quick(ObjectiveKind::rate, 3);
    const auto res = optimize_deployment(f, p, c);
    const Estimate best = res.trace.best().final_value;
    const Estimate lattice = average_rate(square_lattice_deployment(8, f.support()), f, p, c.quadrature);
    const Estimate matched = average_rate(matched_density_deployment(f, 8, 1), f, p, c.quadrature);
    CHECK(best.value >= lattice.value);
    CHECK(best.value >= matched.value - 3.0 * matched.std_error);
}

TEST_CASE("trace bookkeeping")
{
    const auto f = UserDensity::uniform_box(Cell::box(2, 1.0));
    OptimizeConfig c = quick(ObjectiveKind::rate, 4);
    c.quadrature.samples = 20000;
    c.max_iters = 40;
    const auto res = optimize_deployment(f, {1.0, 3.0, 5, 2}, c);
    const auto &rs = res.trace.restarts;
    REQUIRE(rs.size() == 4);
    CHECK(rs[0].init == "square");
    CHECK(rs[1].init == "hex");
    CHECK(rs[2].init == "matched");
    CHECK(rs[3].init == "random");
    double best = -INFINITY;
    for (const auto &r : rs)
    {
        best = std::max(best, r.final_value.value);
        CHECK(r.grad_norm.size() == r.objective.size());
        CHECK(r.step.size() == r.iterations);
        for (std::size_t k = 1; k < r.objective.size(); ++k)
            CHECK(r.objective[k] >= r.objective[k - 1]);
    }
    CHECK(res.trace.best().final_value.value == best);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(f.support().contains(res.deployment.point(i)));
}

TEST_CASE("optimizer output follows a translated density")
{
    OptimizeConfig c = quick(ObjectiveKind::rate, 2);
    c.max_iters = 60;
    const RateParams p{1.0, 4.0, 4, 1};
    const auto a = optimize_deployment(UserDensity::beta25(), p, c);
    const auto b = optimize_deployment(UserDensity::beta25(0.75), p, c);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(near(b.deployment.flat()[i], a.deployment.flat()[i] + 0.75, 1e-6));

    const std::vector<double> shift{-2.0, 0.5};
    const Cell cell = Cell::box(2, 1.0);
    CHECK(test::max_abs_diff(square_lattice_deployment(6, cell.translated(shift)).flat(),
                             square_lattice_deployment(6, cell).translated(shift).flat()) <= 1e-12);
    CHECK(test::max_abs_diff(hex_lattice_deployment(9, cell.translated(shift)).flat(),
                             hex_lattice_deployment(9, cell).translated(shift).flat()) <= 1e-12);
    CHECK(test::max_abs_diff(matched_density_deployment(UserDensity::beta25(3.0), 5, 1).flat(),
                             matched_density_deployment(UserDensity::beta25(), 5, 1).translated(std::vector<double>{3.0}).flat()) <= 1e-12);

    const auto f = UserDensity::uniform_box(cell);
    OptimizeConfig c2 = quick(ObjectiveKind::logquant, 1);
    c2.quadrature.samples = 20000;
    c2.max_iters = 30;
    const auto u = optimize_deployment(f, {1.0, 2.0, 4, 2}, c2);
    const auto v = optimize_deployment(f.translated(shift), {1.0, 2.0, 4, 2}, c2);
    CHECK(test::max_abs_diff(v.deployment.flat(), u.deployment.translated(shift).flat()) <= 1e-6);
}

TEST_CASE("log_lloyd examples")
{
    QuadratureSpec q;
    q.samples = 100000;
    const auto fixed = log_lloyd(test::line(midpoints(4)), unit_line, 5, q);
    CHECK(fixed.movement.size() == 5);
    CHECK(fixed.movement.back() <= 1e-3);
    CHECK(test::max_abs_diff(fixed.deployment.flat(), midpoints(4)) <= 1e-3);

    const auto single = log_lloyd(test::line({0.1}), unit_line, 3, q);
    CHECK(near(single.deployment.flat()[0], 0.5, 1e-3));

    const auto f = UserDensity::beta25();
    const auto traj = log_lloyd(test::line({0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.7, 0.9}), f, 8, q);
    REQUIRE(traj.objective.size() == 9);
    for (std::size_t k = 1; k < traj.objective.size(); ++k)
        CHECK(traj.objective[k] >= traj.objective[k - 1]);
    CHECK(traj.empty_cells.empty());

    CHECK_THROWS_AS(log_lloyd(test::line({0.5}), unit_line, 0, q), std::invalid_argument);
}

TEST_CASE("log_lloyd keeps antennas without nodes in place")
{
    QuadratureSpec q;
    q.samples = 20000;
    const Deployment x0 = test::plane({{0.0, 0.0}, {50.0, 50.0}});
    const auto res = log_lloyd(x0, UserDensity::gaussian2d(), 2, q);
    REQUIRE(res.empty_cells.size() == 1);
    CHECK(res.empty_cells[0] == 1);
    CHECK(res.deployment.point(1)[0] == 50.0);
    CHECK(res.deployment.point(1)[1] == 50.0);
}

TEST_CASE("matched_density_deployment examples")
{
    CHECK(test::max_abs_diff(matched_density_deployment(unit_line, 4, 1).flat(), midpoints(4)) <= 1e-12);

    const auto f = UserDensity::beta25();
    const auto m = matched_density_deployment(f, 2, 1);
    CHECK(near(f.cdf(m.flat()[0]), 0.25, 1e-9));
    CHECK(near(f.cdf(m.flat()[1]), 0.75, 1e-9));
}

TEST_CASE("matched gaussian deployment follows the density")
{
    const auto f = UserDensity::gaussian2d();
    const std::size_t n = 1000;
    const Deployment x = matched_density_deployment(f, n, 7);
    REQUIRE(x.size() == n);
    // equiprobable 5 x 5 bins from the marginal normal quantiles (sd 1/sqrt 2)
    const boost::math::normal_distribution<double> marginal(0.0, std::sqrt(0.5));
    std::vector<double> edges;
    for (int k = 1; k < 5; ++k)
        edges.push_back(boost::math::quantile(marginal, k / 5.0));
    auto bin = [&](double v) { return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()); };
    std::vector<double> counts(25, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        counts[bin(x.point(i)[0]) * 5 + bin(x.point(i)[1])] += 1.0;
    const double expected = n / 25.0;
    double chi2 = 0.0;
    for (double c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 <= 42.980); // 99th percentile of chi-square with 24 degrees of freedom
}

} // TEST_SUITE
