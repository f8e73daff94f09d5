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

#ifndef DMIMO_ASYMPTOTICS_HPP
#define DMIMO_ASYMPTOTICS_HPP

#include "dmimo/geometry.hpp"
#include "dmimo/placement.hpp"
#include "dmimo/quadrature.hpp"
#include "dmimo/rate.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dmimo
{

// Bounded region of positive measure used for normalized logarithmic moments.
class MomentRegion
{
  public:
    enum class Kind
    {
        interval,
        cube,
        ball,
        hexagon,
        polygon
    };

    static MomentRegion interval(double length = 1.0);
    static MomentRegion cube(std::size_t d, double side = 1.0);
    static MomentRegion ball(std::size_t d, double radius = 1.0);
    // Regular hexagon centred at the origin with the given side length.
    static MomentRegion hexagon(double side = 1.0);
    // Simple, counter-clockwise polygon in the plane.
    static MomentRegion polygon(std::vector<std::array<double, 2>> vertices);

    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    double measure() const noexcept { return measure_; }
    const std::vector<double> &centroid() const noexcept { return centroid_; }
    const std::vector<double> &lower() const noexcept { return lo_; }
    double extent() const noexcept { return extent_; } // side of the bounding cube
    const std::vector<std::array<double, 2>> &vertices() const noexcept { return vertices_; }

    bool contains(std::span<const double> u) const;
    MomentRegion scaled(double alpha) const;
    std::string name() const;

  private:
    MomentRegion() = default;
    void finish_polygon();

    Kind kind_ = Kind::interval;
    std::size_t dim_ = 1;
    double size_ = 1.0; // side, length or radius
    double measure_ = 0.0;
    std::vector<double> centroid_;
    std::vector<double> lo_;
    double extent_ = 0.0;
    std::vector<std::array<double, 2>> vertices_;
};

// Normalized logarithmic moment about the centroid, by stratified sampling of
// the bounding cube.
Estimate zeta_region(const MomentRegion &region, const QuadratureSpec &q = {});

double zeta_ball(std::size_t d);
// Closed form for d <= 2, sampled otherwise.
double zeta_cube(std::size_t d, const QuadratureSpec &q = {});
double zeta_hexagon() noexcept;
// Best known tessellation constant: log(2e) for d = 1, the hexagon for d = 2.
std::optional<double> zeta_star(std::size_t d);

double predict_rate(const RateParams &p, double entropy, double zeta_star);
double lower_bound_prop1(const RateParams &p, double side);
double upper_bound_prop2(const RateParams &p, const Cell &cell, double sup_f);
std::pair<double, double> rho_bounds(const RateParams &p, double eta);

struct RhoFit
{
    std::vector<double> n;
    std::vector<double> rate;
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

// Least squares of rate against log n.
RhoFit estimate_rho(const std::vector<double> &n, const std::vector<double> &rate);

double predict_rtilde_uniform(std::size_t n, double side, std::size_t d, double zeta_star);

struct ZetaStarEstimate
{
    std::size_t d = 0;
    std::size_t n = 0;
    double value = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0; // 95% interval from the sampling error alone
};

// Matches an optimized unit-cube codebook of size n against the uniform
// quantizer law to back out the tessellation constant.
ZetaStarEstimate estimate_zeta_star(std::size_t d, std::size_t n, const OptimizeConfig &cfg);

} // namespace dmimo

#endif
