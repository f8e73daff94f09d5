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

#ifndef DMIMO_RATE_HPP
#define DMIMO_RATE_HPP

#include "dmimo/density.hpp"
#include "dmimo/geometry.hpp"
#include "dmimo/quadrature.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dmimo
{

// Physical constants of the per-user rate log(1 + (P/n) sum_i |u - x_i|^-r).
struct RateParams
{
    double P = 1.0;      // SNR scale
    double r = 2.0;      // path-loss exponent
    std::size_t n = 1;   // antenna locations
    std::size_t d = 1;   // ambient dimension

    void validate() const;
    void check_deployment(const Deployment &x) const;
    static RateParams for_deployment(const Deployment &x, double P, double r) { return {P, r, x.size(), x.dim()}; }
};

// s^(-r/2) with exact integer-power fast paths.
double inverse_power_sq(double squared, double r) noexcept;

// Per-user rate at u in nats/s/Hz. Distances are passed through the smooth
// floor of QuadratureSpec::distance_floor (identity above the floor). With a
// zero floor and u on an antenna the result is +infinity.
double rate_at_point(std::span<const double> u, const Deployment &x, const RateParams &p, double distance_floor = 0.0);
inline double rate_at_point(const Point &u, const Deployment &x, const RateParams &p, double distance_floor = 0.0)
{
    return rate_at_point(u.view(), x, p, distance_floor);
}

// Objective value together with the gradient with respect to every antenna
// coordinate, all estimated on one node set.
struct GradientEstimate
{
    std::size_t n = 0;
    std::size_t d = 0;
    Estimate objective;
    std::vector<double> value;     // n*d, point-major
    std::vector<double> std_error; // n*d

    std::span<const double> of(std::size_t i) const { return {value.data() + i * d, d}; }
    double norm() const;
};

// Average rate R(X) = int R(u, X) f(u) du.
Estimate average_rate(const Deployment &x, const UserDensity &f, const RateParams &p, const QuadratureSpec &q);
Estimate average_rate(const Deployment &x, const SampleSet &s, const RateParams &p, double distance_floor);

// Average rate and its min-distance surrogate
// int log(1 + (P/n) min_i |u - x_i|^-r) f du, which never exceeds it. The
// ordering is checked at every node.
struct RateWithSurrogate
{
    Estimate rate;
    Estimate surrogate;
};
RateWithSurrogate average_rate_with_surrogate(const Deployment &x, const SampleSet &s, const RateParams &p,
                                              double distance_floor);

// Gradient of the average rate under the integral, on the same nodes as
// average_rate for the same seed. Requires r > 0.
GradientEstimate average_rate_grad(const Deployment &x, const UserDensity &f, const RateParams &p,
                                   const QuadratureSpec &q);
GradientEstimate average_rate_grad(const Deployment &x, const SampleSet &s, const RateParams &p,
                                   double distance_floor);

// Log-quantizer objective int log(1 / min_i |u - x_i|) f(u) du.
Estimate quantizer_objective(const Deployment &x, const UserDensity &f, const QuadratureSpec &q);
Estimate quantizer_objective(const Deployment &x, const SampleSet &s, double distance_floor);

// Gradient of the log-quantizer objective: node u contributes
// (u - x_i) / |u - x_i|^2 to the antenna that wins it (lowest index on ties).
GradientEstimate quantizer_objective_grad(const Deployment &x, const UserDensity &f, const QuadratureSpec &q);
GradientEstimate quantizer_objective_grad(const Deployment &x, const SampleSet &s, double distance_floor);

} // namespace dmimo

#endif
