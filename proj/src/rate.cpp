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

#include "dmimo/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dmimo
{

namespace
{

double ipow(double b, unsigned k) noexcept
{
    double r = 1.0;
    while (k)
    {
        if (k & 1U)
            r *= b;
        b *= b;
        k >>= 1U;
    }
    return r;
}

// Summation order for antenna terms: lexicographic in x, so the value of a
// deployment does not depend on how its points are listed.
std::vector<std::size_t> canonical_order(const Deployment &x)
{
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&x](std::size_t a, std::size_t b)
                     {
                         auto pa = x.point(a);
                         auto pb = x.point(b);
                         return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
                     });
    return idx;
}

struct Term
{
    double power;  // floored distance ^ -r
    double coeff;  // d power / d x = coeff * (x - u)
};

Term antenna_term(double sq, double r, double eps) noexcept
{
    if (eps > 0.0 && sq < eps * eps)
    {
        const auto fd = floor_distance(std::sqrt(sq), eps);
        const double power = inverse_power_sq(fd.value * fd.value, r);
        return {power, -r * power / (fd.value * eps)};
    }
    const double power = inverse_power_sq(sq, r);
    return {power, sq > 0.0 ? -r * power / sq : 0.0};
}

void require_quadrature_dim(const SampleSet &s, const Deployment &x)
{
    if (s.dim != x.dim())
        throw std::invalid_argument("integration nodes and deployment differ in dimension");
}

GradientEstimate pack(const VectorEstimate &v, std::size_t n, std::size_t d)
{
    GradientEstimate g;
    g.n = n;
    g.d = d;
    g.objective = v[0];
    g.value.assign(v.value.begin() + 1, v.value.end());
    g.std_error.assign(v.std_error.begin() + 1, v.std_error.end());
    return g;
}

} // namespace

void RateParams::validate() const
{
    if (!(P > 0.0) || !std::isfinite(P))
        throw std::invalid_argument("RateParams: P must be positive");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("RateParams: path-loss exponent r must be >= 0");
    if (n < 1)
        throw std::invalid_argument("RateParams: n must be at least 1");
    if (d < 1)
        throw std::invalid_argument("RateParams: d must be at least 1");
}

void RateParams::check_deployment(const Deployment &x) const
{
    validate();
    if (x.size() != n)
        throw std::invalid_argument("RateParams: n = " + std::to_string(n) + " does not match deployment size " +
                                    std::to_string(x.size()));
    if (x.dim() != d)
        throw std::invalid_argument("RateParams: dimension does not match deployment");
}

double inverse_power_sq(double squared, double r) noexcept
{
    if (r == 0.0)
        return 1.0;
    const double twice = 2.0 * r;
    if (twice == std::floor(twice) && r <= 64.0)
    {
        // r/2 = k + (half ? 1/2 : 0)
        const auto k = static_cast<unsigned>(std::floor(r / 2.0));
        const double frac = r / 2.0 - static_cast<double>(k);
        double base = ipow(squared, k);
        if (frac == 0.5)
            base *= std::sqrt(squared);
        else if (frac != 0.0)
            base *= std::pow(squared, frac);
        return 1.0 / base;
    }
    return std::pow(squared, -0.5 * r);
}

double GradientEstimate::norm() const
{
    double s = 0.0;
    for (double v : value)
        s += v * v;
    return std::sqrt(s);
}

double rate_at_point(std::span<const double> u, const Deployment &x, const RateParams &p, double distance_floor)
{
    p.check_deployment(x);
    if (u.size() != x.dim())
        throw std::invalid_argument("rate_at_point: dimension mismatch");
    if (!(distance_floor >= 0.0))
        throw std::invalid_argument("rate_at_point: distance floor must be >= 0");
    double sum = 0.0;
    for (std::size_t i : canonical_order(x))
        sum += antenna_term(squared_distance(u, x.point(i)), p.r, distance_floor).power;
    if (std::isinf(sum))
        return std::numeric_limits<double>::infinity();
    return std::log1p(p.P / static_cast<double>(p.n) * sum);
}

Estimate average_rate(const Deployment &x, const SampleSet &s, const RateParams &p, double distance_floor)
{
    return average_rate_with_surrogate(x, s, p, distance_floor).rate;
}

Estimate average_rate(const Deployment &x, const UserDensity &f, const RateParams &p, const QuadratureSpec &q)
{
    p.check_deployment(x);
    return average_rate(x, draw_samples(f, q), p, q.distance_floor);
}

RateWithSurrogate average_rate_with_surrogate(const Deployment &x, const SampleSet &s, const RateParams &p,
                                              double distance_floor)
{
    p.check_deployment(x);
    require_quadrature_dim(s, x);
    const auto order = canonical_order(x);
    const double scale = p.P / static_cast<double>(p.n);
    auto v = integrate(s, 2,
                       [&](std::size_t, std::span<const double> u, std::span<double> out)
                       {
                           double sum = 0.0;
                           double largest = 0.0;
                           for (std::size_t i : order)
                           {
                               const double t = antenna_term(squared_distance(u, x.point(i)), p.r, distance_floor).power;
                               sum += t;
                               largest = std::max(largest, t);
                           }
                           if (!(sum >= largest))
                               throw std::logic_error("average_rate: antenna sum fell below its largest term");
                           out[0] = std::log1p(scale * sum);
                           out[1] = std::log1p(scale * largest);
                       });
    return {v[0], v[1]};
}

GradientEstimate average_rate_grad(const Deployment &x, const SampleSet &s, const RateParams &p,
                                   double distance_floor)
{
    p.check_deployment(x);
    require_quadrature_dim(s, x);
    if (!(p.r > 0.0))
        throw std::invalid_argument("average_rate_grad: requires r > 0");
    const std::size_t n = x.size(), d = x.dim();
    const auto order = canonical_order(x);
    const double scale = p.P / static_cast<double>(n);

    auto v = integrate(s, 1 + n * d,
                       [&](std::size_t, std::span<const double> u, std::span<double> out)
                       {
                           thread_local std::vector<Term> terms;
                           terms.resize(n);
                           double sum = 0.0;
                           for (std::size_t i : order)
                           {
                               terms[i] = antenna_term(squared_distance(u, x.point(i)), p.r, distance_floor);
                               sum += terms[i].power;
                           }
                           const double denom = 1.0 + scale * sum;
                           out[0] = std::log1p(scale * sum);
                           for (std::size_t i = 0; i < n; ++i)
                           {
                               const double c = scale * terms[i].coeff / denom;
                               auto xi = x.point(i);
                               for (std::size_t a = 0; a < d; ++a)
                                   out[1 + i * d + a] = c * (xi[a] - u[a]);
                           }
                       });
    return pack(v, n, d);
}

GradientEstimate average_rate_grad(const Deployment &x, const UserDensity &f, const RateParams &p,
                                   const QuadratureSpec &q)
{
    p.check_deployment(x);
    return average_rate_grad(x, draw_samples(f, q), p, q.distance_floor);
}

namespace
{

struct Winner
{
    std::size_t index;
    double sq;
};

Winner nearest_sq(std::span<const double> u, const Deployment &x) noexcept
{
    Winner w{0, squared_distance(u, x.point(0))};
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        const double s = squared_distance(u, x.point(i));
        if (s < w.sq)
            w = {i, s};
    }
    return w;
}

double neg_log_floored(double sq, double eps) noexcept
{
    if (eps > 0.0 && sq < eps * eps)
        return -std::log(floor_distance(std::sqrt(sq), eps).value);
    return -0.5 * std::log(sq);
}

} // namespace

Estimate quantizer_objective(const Deployment &x, const SampleSet &s, double distance_floor)
{
    require_quadrature_dim(s, x);
    return integrate_scalar(s, [&](std::size_t, std::span<const double> u)
                            { return neg_log_floored(nearest_sq(u, x).sq, distance_floor); });
}

Estimate quantizer_objective(const Deployment &x, const UserDensity &f, const QuadratureSpec &q)
{
    return quantizer_objective(x, draw_samples(f, q), q.distance_floor);
}

GradientEstimate quantizer_objective_grad(const Deployment &x, const SampleSet &s, double distance_floor)
{
    require_quadrature_dim(s, x);
    const std::size_t n = x.size(), d = x.dim();
    auto v = integrate(s, 1 + n * d,
                       [&](std::size_t, std::span<const double> u, std::span<double> out)
                       {
                           std::fill(out.begin(), out.end(), 0.0);
                           const Winner w = nearest_sq(u, x);
                           out[0] = neg_log_floored(w.sq, distance_floor);
                           // d/dx (-log t~) = -(t~'/t~) (x - u) / t
                           double c;
                           if (distance_floor > 0.0 && w.sq < distance_floor * distance_floor)
                               c = -1.0 / (floor_distance(std::sqrt(w.sq), distance_floor).value * distance_floor);
                           else
                               c = w.sq > 0.0 ? -1.0 / w.sq : 0.0;
                           auto xi = x.point(w.index);
                           for (std::size_t a = 0; a < d; ++a)
                               out[1 + w.index * d + a] = c * (xi[a] - u[a]);
                       });
    return pack(v, n, d);
}

GradientEstimate quantizer_objective_grad(const Deployment &x, const UserDensity &f, const QuadratureSpec &q)
{
    return quantizer_objective_grad(x, draw_samples(f, q), q.distance_floor);
}

} // namespace dmimo
