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
#include "dmimo/geometry.hpp"
#include "dmimo/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <stdexcept>

using namespace dmimo;
using dmimo::test::near;

TEST_SUITE("geometry")
{

TEST_CASE("points reject empty and non-finite coordinates")
{
    CHECK_THROWS_AS(Point(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Point({0.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(Point({INFINITY}), std::invalid_argument);
    CHECK(Point({1.0, 2.0}).dim() == 2);
}

TEST_CASE("cells")
{
    const Cell box = Cell::box(2, 3.0);
    CHECK(box.bounded());
    CHECK(box.measure() == doctest::Approx(9.0));
    CHECK(box.contains(std::vector<double>{0.0, 3.0}));
    CHECK_FALSE(box.contains(std::vector<double>{-0.1, 1.0}));
    std::vector<double> u{-1.0, 4.0};
    box.project(u);
    CHECK(u == std::vector<double>{0.0, 3.0});
    CHECK_THROWS_AS(Cell::box(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Cell::box(0, 1.0), std::invalid_argument);

    const Cell all = Cell::whole_space(2);
    CHECK_FALSE(all.bounded());
    CHECK(std::isinf(all.measure()));
    CHECK(all.contains(std::vector<double>{1e9, -1e9}));

    const Cell moved = box.translated(std::vector<double>{1.0, -2.0});
    CHECK(moved.origin()[0] == 1.0);
    CHECK(moved.contains(std::vector<double>{3.5, 0.5}));
}

TEST_CASE("deployments require a common dimension")
{
    CHECK_THROWS_AS(Deployment::from_points({Point({0.0}), Point({0.0, 1.0})}), std::invalid_argument);
    CHECK_THROWS_AS(Deployment(2, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(Deployment(1, {}), std::invalid_argument);
    const Deployment dup = test::line({0.5, 0.5});
    CHECK(dup.size() == 2);
}

TEST_CASE("nearest_antenna examples")
{
    const Deployment x = test::line({0.0, 1.0});
    auto a = nearest_antenna(Point({0.5}), x);
    CHECK(a.index == 0);
    CHECK(a.distance == doctest::Approx(0.5));
    auto b = nearest_antenna(Point({0.1}), x);
    CHECK(b.index == 0);
    CHECK(b.distance == doctest::Approx(0.1));
    const Deployment y = test::plane({{0, 0}, {1, 1}, {0.4, 0.5}});
    auto c = nearest_antenna(Point({0.5, 0.5}), y);
    CHECK(c.index == 2);
    CHECK(c.distance == doctest::Approx(0.1));
    CHECK_THROWS_AS(nearest_antenna(Point({0.5, 0.5}), x), std::invalid_argument);
}

TEST_CASE("voronoi_partition_1d examples")
{
    const Cell unit = Cell::box(1, 1.0);
    auto v = voronoi_partition_1d(test::line({0.125, 0.375, 0.625, 0.875}), unit);
    REQUIRE(v.size() == 4);
    CHECK(v[0].lo == 0.0);
    CHECK(v[0].hi == doctest::Approx(0.25));
    CHECK(v[1].hi == doctest::Approx(0.5));
    CHECK(v[2].hi == doctest::Approx(0.75));
    CHECK(v[3].hi == 1.0);

    auto one = voronoi_partition_1d(test::line({0.5}), unit);
    REQUIRE(one.size() == 1);
    CHECK((one[0].lo == 0.0 && one[0].hi == 1.0));

    auto two = voronoi_partition_1d(test::line({0.8, 0.2}), unit);
    CHECK(two[0].lo == doctest::Approx(0.5)); // intervals follow deployment order
    CHECK(two[1].hi == doctest::Approx(0.5));

    CHECK_THROWS_AS(voronoi_partition_1d(test::plane({{0.1, 0.1}}), Cell::box(2, 1.0)), std::invalid_argument);
}

TEST_CASE("voronoi_partition_1d tiles the cell")
{
    const Cell cell = Cell::box(1, 2.5);
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t n = 1 + trial % 9;
        std::vector<double> xs(n);
        for (auto &x : xs)
            x = 2.5 * rng.uniform();
        if (trial % 5 == 0)
            xs.push_back(xs.front()); // duplicates are allowed
        const auto v = voronoi_partition_1d(test::line(xs), cell);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
        double total = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            total += sorted[i].length();
            if (i > 0 && sorted[i].length() > 0.0)
                CHECK(sorted[i].lo >= sorted[i - 1].hi - 1e-12);
        }
        CHECK(near(total, 2.5, 1e-12));
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (v[i].length() > 0)
            {
                const double mid = 0.5 * (v[i].lo + v[i].hi);
                CHECK(nearest_antenna(Point({mid}), test::line(xs)).index == i);
            }
    }
}

TEST_CASE("square_lattice_deployment examples")
{
    auto a = square_lattice_deployment(4, Cell::box(1, 1.0));
    CHECK(a.flat() == std::vector<double>{0.125, 0.375, 0.625, 0.875});
    auto b = square_lattice_deployment(4, Cell::box(2, 1.0));
    CHECK(b.flat() == std::vector<double>{0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75});
    auto c = square_lattice_deployment(5, Cell::box(2, 1.0));
    REQUIRE(c.size() == 5);
    CHECK(c.point(4)[0] == 0.25);
    CHECK(c.point(4)[1] == 0.25);
    CHECK_THROWS_AS(square_lattice_deployment(4, Cell::whole_space(2)), std::invalid_argument);
    CHECK_THROWS_AS(square_lattice_deployment(0, Cell::box(1, 1.0)), std::invalid_argument);
}

TEST_CASE("square lattice covering radius")
{
    for (std::size_t d : {1u, 2u})
        for (std::size_t n : {1u, 3u, 4u, 7u, 9u, 10u})
        {
            const double M = 2.0;
            const Cell cell = Cell::box(d, M);
            const Deployment x = square_lattice_deployment(n, cell);
            const auto k = static_cast<std::size_t>(std::floor(std::pow(n + 1e-9, 1.0 / d)));
            const double bound = M * std::sqrt(static_cast<double>(d)) / (2.0 * k);
            double worst = 0.0;
            for (const Point &u : sample(UserDensity::uniform_box(cell), 10000, 5))
                worst = std::max(worst, nearest_antenna(u, x).distance);
            CHECK(worst <= bound + 1e-12);
        }
}

TEST_CASE("hex_lattice_deployment examples")
{
    const Cell unit = Cell::box(2, 1.0);
    auto one = hex_lattice_deployment(1, unit);
    CHECK(one.flat() == std::vector<double>{0.5, 0.5});

    auto seven = hex_lattice_deployment(7, unit);
    REQUIRE(seven.size() == 7);
    std::size_t centre = 7;
    for (std::size_t i = 0; i < 7; ++i)
    {
        CHECK(unit.contains(seven.point(i)));
        if (distance(seven.point(i), std::vector<double>{0.5, 0.5}) < 1e-9)
            centre = i;
    }
    REQUIRE(centre < 7);
    double ring = -1.0;
    for (std::size_t i = 0; i < 7; ++i)
    {
        if (i == centre)
            continue;
        const double rr = distance(seven.point(i), seven.point(centre));
        if (ring < 0)
            ring = rr;
        CHECK(near(rr, ring, 1e-9));
        // each ring point has exactly two ring neighbours at the same spacing
        int adjacent = 0;
        for (std::size_t j = 0; j < 7; ++j)
            if (j != i && j != centre && near(distance(seven.point(i), seven.point(j)), ring, 1e-9))
                ++adjacent;
        CHECK(adjacent == 2);
    }

    auto many = hex_lattice_deployment(64, unit);
    REQUIRE(many.size() == 64);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
    {
        CHECK(unit.contains(many.point(i)));
        double nn = INFINITY;
        for (std::size_t j = 0; j < 64; ++j)
            if (j != i)
                nn = std::min(nn, distance(many.point(i), many.point(j)));
        lo = std::min(lo, nn);
        hi = std::max(hi, nn);
    }
    CHECK(hi / lo <= 1.01);

    CHECK_THROWS_AS(hex_lattice_deployment(4, Cell::box(1, 1.0)), std::invalid_argument);
}

TEST_CASE("lattice specs")
{
    const auto hex = LatticeSpec::hexagonal(2.0);
    CHECK(hex.dim() == 2);
    CHECK(hex.beta() == 2.0);
    const auto &B = hex.basis();
    CHECK(near(B[0] * B[3] - B[1] * B[2], 1.0, 1e-12));
    CHECK_THROWS_AS(LatticeSpec::custom(2, 1.0, {1.0, 0.0, 0.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(LatticeSpec::integer(1, 0.0), std::invalid_argument);
    CHECK_NOTHROW(LatticeSpec::custom(2, 1.0, {2.0, 0.0, 0.0, 0.5}));
}

TEST_CASE("lattice_sum_ratio examples")
{
    const auto Z = LatticeSpec::integer(1);
    const std::vector<double> u{0.25};
    // sum over k of (u - k)^-2 is pi^2 / sin^2(pi u)
    const double oracle = std::numbers::pi * std::numbers::pi / 0.5 / 16.0;
    CHECK(near(lattice_sum_ratio(u, Z, 2.0, 100000), oracle, 1e-3));
    const double r16 = lattice_sum_ratio(u, Z, 16.0, 100);
    CHECK(r16 >= 1.0);
    CHECK(r16 <= 1.0 + 1e-6);
    CHECK_THROWS_AS(lattice_sum_ratio(std::vector<double>{0.5}, Z, 4.0, 100), std::invalid_argument);

    CHECK_THROWS_AS(lattice_sum_ratio(std::vector<double>{1.0}, Z, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(lattice_sum_ratio(u, Z, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lattice_sum_ratio(u, Z, 4.0, 1), std::invalid_argument);
}

TEST_CASE("lattice_sum_ratio is at least one and decreases in r")
{
    const std::vector<double> u{0.25};
    const auto Z = LatticeSpec::integer(1);
    const double a = lattice_sum_ratio(u, Z, 8.0), b = lattice_sum_ratio(u, Z, 16.0), c = lattice_sum_ratio(u, Z, 32.0);
    CHECK(a > b);
    CHECK(b > c);
    CHECK(c >= 1.0);

    CounterRng rng(3, 0);
    const auto H = LatticeSpec::hexagonal();
    for (int k = 0; k < 20; ++k)
    {
        const std::vector<double> v{rng.uniform(), rng.uniform()};
        CHECK(lattice_sum_ratio(v, H, 3.0 + k, 30) >= 1.0);
        CHECK(lattice_sum_ratio(v, LatticeSpec::integer(2, 0.5), 4.0 + k, 30) >= 1.0);
    }
}

} // TEST_SUITE
