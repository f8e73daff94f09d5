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

#ifndef DMIMO_GEOMETRY_HPP
#define DMIMO_GEOMETRY_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace dmimo
{

// A location in R^d, in cell-length units.
struct Point
{
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c);
    Point(std::initializer_list<double> c);

    std::size_t dim() const noexcept { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    std::span<const double> view() const noexcept { return coords; }
};

double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

// Integration region: the box [origin, origin + M]^d, or all of R^d.
class Cell
{
  public:
    static Cell box(std::size_t d, double side, std::vector<double> origin = {});
    static Cell whole_space(std::size_t d);

    std::size_t dim() const noexcept { return dim_; }
    bool bounded() const noexcept { return bounded_; }
    double side() const noexcept { return side_; }
    std::span<const double> origin() const noexcept { return origin_; }

    // M^d for a box, +inf otherwise.
    double measure() const noexcept;
    bool contains(std::span<const double> u, double tol = 0.0) const;
    // Clamps u into the box; no-op for the unbounded kind.
    void project(std::span<double> u) const;
    Cell translated(std::span<const double> shift) const;

  private:
    Cell() = default;
    std::size_t dim_ = 1;
    bool bounded_ = true;
    double side_ = 1.0;
    std::vector<double> origin_;
};

// Ordered list of n antenna-group locations; duplicates are allowed.
// Coordinates are stored flat, point-major.
class Deployment
{
  public:
    Deployment(std::size_t dim, std::vector<double> flat);
    static Deployment from_points(const std::vector<Point> &points);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coords_.size() / dim_; }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
    Point at(std::size_t i) const;
    const std::vector<double> &flat() const noexcept { return coords_; }
    std::vector<double> &flat() noexcept { return coords_; }

    Deployment translated(std::span<const double> shift) const;
    // Points ordered lexicographically; useful for comparing codebooks in d=1.
    Deployment sorted() const;

  private:
    std::size_t dim_;
    std::vector<double> coords_;
};

struct Nearest
{
    std::size_t index;
    double distance;
};

// Closest antenna to u; ties go to the lowest index.
Nearest nearest_antenna(std::span<const double> u, const Deployment &x);
inline Nearest nearest_antenna(const Point &u, const Deployment &x) { return nearest_antenna(u.view(), x); }

struct Interval
{
    double lo;
    double hi;
    double length() const noexcept { return hi - lo; }
};

// Voronoi cells of a 1-D deployment inside a box cell, returned in deployment
// order. A duplicated location gets an empty interval for every copy but the
// first.
std::vector<Interval> voronoi_partition_1d(const Deployment &x, const Cell &cell);

// k^d cube centres with k = floor(n^(1/d)); the remaining n - k^d entries
// repeat grid points round-robin so the list has exactly n entries.
Deployment square_lattice_deployment(std::size_t n, const Cell &cell);

// n points of a triangular lattice (hexagonal Voronoi cells) centred in the
// cell. The spacing starts at the value for which n hexagons tile the cell and
// shrinks until at least n lattice points fall inside; surplus points closest
// to the boundary are dropped.
Deployment hex_lattice_deployment(std::size_t n, const Cell &cell);

// Lattice {beta * B z : z in Z^d} with det(B) = 1.
class LatticeSpec
{
  public:
    enum class Kind
    {
        integer,
        hexagonal,
        custom
    };

    static LatticeSpec integer(std::size_t d, double beta = 1.0);
    static LatticeSpec hexagonal(double beta = 1.0);
    // basis is row-major d x d; columns are the generator vectors.
    static LatticeSpec custom(std::size_t d, double beta, std::vector<double> basis);

    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    double beta() const noexcept { return beta_; }
    const std::vector<double> &basis() const noexcept { return basis_; }

    // beta * B z
    void point(std::span<const long> z, std::span<double> out) const;

  private:
    LatticeSpec(Kind kind, std::size_t d, double beta, std::vector<double> basis);
    Kind kind_;
    std::size_t dim_;
    double beta_;
    std::vector<double> basis_;
};

// Sum of |u - x|^-r over lattice points with integer coordinates in
// [-radius, radius]^d, divided by its largest term. Always >= 1 and tends to 1
// as r grows for u off the tie set. A u with two equally near lattice points
// (to relative precision 1e-12) is rejected.
//
// Truncation error: for r > d the omitted tail of the sum is at most about
// S_(d-1) rho^(d-r) / (r-d) by integral comparison, where rho is the distance
// from u to the edge of the index window (~ beta * sigma_min(B) * radius).
// For d = 1, r = 2 that is ~2 / radius, so use radius 1e5 there.
double lattice_sum_ratio(std::span<const double> u, const LatticeSpec &lattice, double r, long radius = 100);

} // namespace dmimo

#endif
