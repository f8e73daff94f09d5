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

#ifndef DMIMO_DENSITY_HPP
#define DMIMO_DENSITY_HPP

#include "dmimo/geometry.hpp"
#include "dmimo/quadrature.hpp"
#include "dmimo/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dmimo
{

enum class DensityKind
{
    uniform_box, // 1 / M^d on [o, o + M]^d
    beta25,      // 30 t (1 - t)^4 on [o, o + 1], t = u - o  (Beta(2,5))
    gaussian2d,  // e^{-|u - c|^2} / pi on R^2
    tabulated    // multilinear interpolation of grid values on a box
};

std::string to_string(DensityKind k);

// User location density f on its support cell.
class UserDensity
{
  public:
    static UserDensity uniform_box(const Cell &cell);
    static UserDensity beta25(double origin = 0.0);
    static UserDensity gaussian2d(std::vector<double> center = {0.0, 0.0});
    // values: resolution^d node values, row-major (first axis slowest), nodes
    // at origin + j * M / (resolution - 1). Renormalized to unit mass.
    static UserDensity tabulated(std::size_t d, double side, std::size_t resolution, std::vector<double> values,
                                 std::vector<double> origin = {});

    DensityKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return support_.dim(); }
    const Cell &support() const noexcept { return support_; }

    double pdf(std::span<const double> u) const;
    double pdf(const Point &u) const { return pdf(u.view()); }

    // Supremum of f over its support.
    double sup_pdf() const noexcept;
    // H(f) in nats when a closed form is known (all kinds but tabulated).
    std::optional<double> closed_form_entropy() const;
    // exp(H(f)/d): the side of a uniform cube with the same entropy; M for box kinds.
    double length_scale() const;

    // One i.i.d. draw (inverse CDF by bisection for beta25, scaled normal pairs
    // for gaussian2d, rejection for tabulated).
    void draw(CounterRng &rng, std::span<double> out) const;
    // Inverse transform from the unit cube; returns the node weight
    // (1 for transform kinds, f(u) * M^d for tabulated).
    double from_unit_cube(std::span<const double> v, std::span<double> out) const;

    // d = 1 only.
    double cdf(double u) const;
    double inverse_cdf(double q) const;

    UserDensity translated(std::span<const double> shift) const;

    const std::vector<double> &table() const noexcept { return table_; }
    std::size_t resolution() const noexcept { return resolution_; }

  private:
    UserDensity(DensityKind kind, Cell support) : kind_(kind), support_(std::move(support)) {}
    double table_pdf(std::span<const double> u) const;

    DensityKind kind_;
    Cell support_;
    std::vector<double> center_; // gaussian2d
    std::size_t resolution_ = 0; // tabulated
    std::vector<double> table_;
    double table_max_ = 0.0;
};

// count i.i.d. draws; draw k uses the counter stream (seed, k).
std::vector<Point> sample(const UserDensity &f, std::size_t count, std::uint64_t seed);

// Integration nodes distributed as f (stratified through the inverse transform
// when q.method is stratified; tabulated densities use weighted box nodes).
SampleSet draw_samples(const UserDensity &f, const QuadratureSpec &q);

enum class EntropyMethod
{
    closed_form,
    monte_carlo
};

// H(f) = int f log(1/f). closed_form throws for tabulated densities;
// monte_carlo returns -mean log f(U) with its standard error over q's nodes.
Estimate differential_entropy(const UserDensity &f, EntropyMethod method, const QuadratureSpec &q = {});

// Monte Carlo estimate of int_S f over the support box (uniform nodes).
Estimate total_mass(const UserDensity &f, const QuadratureSpec &q);

} // namespace dmimo

#endif
