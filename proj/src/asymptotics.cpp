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

#include "dmimo/asymptotics.hpp"

#include "dmimo/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmimo
{

namespace
{

const double pi = std::numbers::pi;

double ball_volume(std::size_t d, double radius)
{
    const double dd = static_cast<double>(d);
    return std::pow(pi, dd / 2.0) / std::tgamma(1.0 + dd / 2.0) * std::pow(radius, dd);
}

double cross(const std::array<double, 2> &o, const std::array<double, 2> &a, const std::array<double, 2> &b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool segments_intersect(const std::array<double, 2> &p1, const std::array<double, 2> &p2,
                        const std::array<double, 2> &q1, const std::array<double, 2> &q2)
{
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](const auto &a, const auto &b, const auto &c)
    {
        return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
               c[1] <= std::max(a[1], b[1]);
    };
    return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
           (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

void require_dim(std::size_t d, const char *what)
{
    if (d < 1)
        throw std::invalid_argument(std::string(what) + ": dimension must be at least 1");
}

} // namespace

// ---------- MomentRegion ----------

MomentRegion MomentRegion::interval(double length)
{
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("MomentRegion::interval: length must be positive");
    MomentRegion m;
    m.kind_ = Kind::interval;
    m.dim_ = 1;
    m.size_ = length;
    m.measure_ = length;
    m.centroid_ = {length / 2.0};
    m.lo_ = {0.0};
    m.extent_ = length;
    return m;
}

MomentRegion MomentRegion::cube(std::size_t d, double side)
{
    require_dim(d, "MomentRegion::cube");
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("MomentRegion::cube: side must be positive");
    MomentRegion m;
    m.kind_ = Kind::cube;
    m.dim_ = d;
    m.size_ = side;
    m.measure_ = std::pow(side, static_cast<double>(d));
    m.centroid_.assign(d, side / 2.0);
    m.lo_.assign(d, 0.0);
    m.extent_ = side;
    return m;
}

MomentRegion MomentRegion::ball(std::size_t d, double radius)
{
    require_dim(d, "MomentRegion::ball");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("MomentRegion::ball: radius must be positive");
    MomentRegion m;
    m.kind_ = Kind::ball;
    m.dim_ = d;
    m.size_ = radius;
    m.measure_ = ball_volume(d, radius);
    m.centroid_.assign(d, 0.0);
    m.lo_.assign(d, -radius);
    m.extent_ = 2.0 * radius;
    return m;
}

MomentRegion MomentRegion::hexagon(double side)
{
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("MomentRegion::hexagon: side must be positive");
    std::vector<std::array<double, 2>> v;
    for (int k = 0; k < 6; ++k)
        v.push_back({side * std::cos(k * pi / 3.0), side * std::sin(k * pi / 3.0)});
    MomentRegion m;
    m.kind_ = Kind::hexagon;
    m.dim_ = 2;
    m.size_ = side;
    m.vertices_ = std::move(v);
    m.finish_polygon();
    m.measure_ = 1.5 * std::sqrt(3.0) * side * side;
    m.centroid_ = {0.0, 0.0};
    return m;
}

MomentRegion MomentRegion::polygon(std::vector<std::array<double, 2>> vertices)
{
    if (vertices.size() < 3)
        throw std::invalid_argument("MomentRegion::polygon: need at least 3 vertices");
    for (const auto &v : vertices)
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
            throw std::invalid_argument("MomentRegion::polygon: vertices must be finite");
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
        {
            const bool adjacent = j == i + 1 || (i == 0 && j == k - 1);
            if (adjacent)
            {
                if (vertices[i] == vertices[j])
                    throw std::invalid_argument("MomentRegion::polygon: repeated vertex");
                continue;
            }
            if (segments_intersect(vertices[i], vertices[(i + 1) % k], vertices[j], vertices[(j + 1) % k]))
                throw std::invalid_argument("MomentRegion::polygon: polygon is not simple");
        }
    MomentRegion m;
    m.kind_ = Kind::polygon;
    m.dim_ = 2;
    m.vertices_ = std::move(vertices);
    m.finish_polygon();
    return m;
}

void MomentRegion::finish_polygon()
{
    double area2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t k = vertices_.size();
    double xmin = vertices_[0][0], xmax = xmin, ymin = vertices_[0][1], ymax = ymin;
    for (std::size_t i = 0; i < k; ++i)
    {
        const auto &a = vertices_[i];
        const auto &b = vertices_[(i + 1) % k];
        const double c = a[0] * b[1] - b[0] * a[1];
        area2 += c;
        cx += (a[0] + b[0]) * c;
        cy += (a[1] + b[1]) * c;
        xmin = std::min(xmin, a[0]);
        xmax = std::max(xmax, a[0]);
        ymin = std::min(ymin, a[1]);
        ymax = std::max(ymax, a[1]);
    }
    if (!(area2 > 0.0))
        throw std::invalid_argument(area2 < 0.0 ? "MomentRegion::polygon: vertices must be counter-clockwise"
                                                : "MomentRegion::polygon: degenerate polygon");
    measure_ = area2 / 2.0;
    centroid_ = {cx / (3.0 * area2), cy / (3.0 * area2)};
    extent_ = std::max(xmax - xmin, ymax - ymin);
    lo_ = {xmin, ymin};
}

bool MomentRegion::contains(std::span<const double> u) const
{
    if (u.size() != dim_)
        throw std::invalid_argument("MomentRegion::contains: dimension mismatch");
    switch (kind_)
    {
    case Kind::interval:
    case Kind::cube:
        return std::all_of(u.begin(), u.end(), [this](double t) { return t >= 0.0 && t <= size_; });
    case Kind::ball:
    {
        double s = 0.0;
        for (double t : u)
            s += t * t;
        return s <= size_ * size_;
    }
    case Kind::hexagon:
    case Kind::polygon:
    {
        bool inside = false;
        const std::size_t k = vertices_.size();
        for (std::size_t i = 0, j = k - 1; i < k; j = i++)
        {
            const auto &a = vertices_[i];
            const auto &b = vertices_[j];
            if ((a[1] > u[1]) != (b[1] > u[1]) && u[0] < (b[0] - a[0]) * (u[1] - a[1]) / (b[1] - a[1]) + a[0])
                inside = !inside;
        }
        return inside;
    }
    }
    return false;
}

MomentRegion MomentRegion::scaled(double alpha) const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("MomentRegion::scaled: alpha must be positive");
    switch (kind_)
    {
    case Kind::interval:
        return interval(size_ * alpha);
    case Kind::cube:
        return cube(dim_, size_ * alpha);
    case Kind::ball:
        return ball(dim_, size_ * alpha);
    case Kind::hexagon:
        return hexagon(size_ * alpha);
    case Kind::polygon:
        break;
    }
    auto v = vertices_;
    for (auto &p : v)
        p = {p[0] * alpha, p[1] * alpha};
    return polygon(std::move(v));
}

std::string MomentRegion::name() const
{
    switch (kind_)
    {
    case Kind::interval:
        return "interval";
    case Kind::cube:
        return "cube";
    case Kind::ball:
        return "ball";
    case Kind::hexagon:
        return "hexagon";
    case Kind::polygon:
        return "polygon";
    }
    return "?";
}

// ---------- constants ----------

Estimate zeta_region(const MomentRegion &region, const QuadratureSpec &q)
{
    q.validate();
    const std::size_t d = region.dim();
    const SampleSet s = box_samples(d, region.extent(), region.lower(), q);
    const auto &c = region.centroid();
    const double eps = q.distance_floor;
    const Estimate integral = integrate_scalar(s,
                                               [&](std::size_t, std::span<const double> u)
                                               {
                                                   if (!region.contains(u))
                                                       return 0.0;
                                                   const double t = distance(u, c);
                                                   return -std::log(floor_distance(t, eps).value);
                                               });
    const double mu = region.measure();
    return {integral.value / mu + std::log(mu) / static_cast<double>(d), integral.std_error / mu};
}

double zeta_ball(std::size_t d)
{
    require_dim(d, "zeta_ball");
    const double dd = static_cast<double>(d);
    return std::log(std::numbers::e * std::pow(pi, dd / 2.0) / std::tgamma(1.0 + dd / 2.0)) / dd;
}

double zeta_cube(std::size_t d, const QuadratureSpec &q)
{
    require_dim(d, "zeta_cube");
    if (d == 1)
        return 1.0 + std::log(2.0);
    if (d == 2)
        return (6.0 + 2.0 * std::log(2.0) - pi) / 4.0;
    return zeta_region(MomentRegion::cube(d), q).value;
}

double zeta_hexagon() noexcept
{
    return 1.5 - pi / (2.0 * std::sqrt(3.0)) + 0.25 * std::log(27.0 / 4.0);
}

std::optional<double> zeta_star(std::size_t d)
{
    if (d == 1)
        return 1.0 + std::log(2.0);
    if (d == 2)
        return zeta_hexagon();
    return std::nullopt;
}

// ---------- predictions and bounds ----------

double predict_rate(const RateParams &p, double entropy, double zeta_star)
{
    p.validate();
    const double d = static_cast<double>(p.d);
    if (!(p.r > d))
        throw std::invalid_argument("predict_rate: the high-resolution prediction requires r > d");
    return (p.r / d - 1.0) * std::log(static_cast<double>(p.n)) + std::log(p.P) + p.r * zeta_star -
           (p.r / d) * entropy;
}

double lower_bound_prop1(const RateParams &p, double side)
{
    p.validate();
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("lower_bound_prop1: cell side must be positive");
    const double d = static_cast<double>(p.d);
    return std::log1p(p.P * std::pow(static_cast<double>(p.n), p.r / d - 1.0) / std::pow(side, p.r));
}

double upper_bound_prop2(const RateParams &p, const Cell &cell, double sup_f)
{
    p.validate();
    if (!cell.bounded())
        throw std::invalid_argument("upper_bound_prop2: the upper bound requires a bounded cell");
    if (!(sup_f > 0.0) || !std::isfinite(sup_f))
        throw std::invalid_argument("upper_bound_prop2: sup_f must be positive and finite");
    const double d = static_cast<double>(p.d);
    const double mu = cell.measure();
    const double eta = mu * sup_f;
    return eta * p.r / d * std::log(static_cast<double>(p.n)) + eta * std::log1p(p.P / std::pow(mu, p.r / d)) +
           2.0 * eta * p.r;
}

std::pair<double, double> rho_bounds(const RateParams &p, double eta)
{
    p.validate();
    if (!(eta >= 1.0 - 1e-12) || !std::isfinite(eta))
        throw std::invalid_argument("rho_bounds: eta must be at least 1");
    const double d = static_cast<double>(p.d);
    return {std::max(0.0, p.r / d - 1.0), eta * p.r / d};
}

RhoFit estimate_rho(const std::vector<double> &n, const std::vector<double> &rate)
{
    if (n.size() != rate.size())
        throw std::invalid_argument("estimate_rho: n and rate lengths differ");
    if (n.size() < 3)
        throw std::invalid_argument("estimate_rho: at least 3 points are required");
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        if (!(n[i] >= 1.0) || !std::isfinite(rate[i]))
            throw std::invalid_argument("estimate_rho: n must be >= 1 and rates finite");
        if (i > 0 && !(n[i] > n[i - 1]))
            throw std::invalid_argument("estimate_rho: n must be strictly increasing");
    }
    const auto k = static_cast<double>(n.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        mx += std::log(n[i]);
        my += rate[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        const double dx = std::log(n[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (rate[i] - my);
    }
    RhoFit fit{n, rate, sxy / sxx, 0.0, 0.0};
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i)
    {
        const double e = rate[i] - (fit.intercept + fit.slope * std::log(n[i]));
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / k);
    return fit;
}

double predict_rtilde_uniform(std::size_t n, double side, std::size_t d, double zeta_star)
{
    require_dim(d, "predict_rtilde_uniform");
    if (n < 1)
        throw std::invalid_argument("predict_rtilde_uniform: n must be at least 1");
    if (!(side > 0.0))
        throw std::invalid_argument("predict_rtilde_uniform: side must be positive");
    const double dd = static_cast<double>(d);
    return std::log(static_cast<double>(n) / std::pow(side, dd)) / dd + zeta_star;
}

ZetaStarEstimate estimate_zeta_star(std::size_t d, std::size_t n, const OptimizeConfig &cfg)
{
    require_dim(d, "estimate_zeta_star");
    OptimizeConfig c = cfg;
    c.objective = ObjectiveKind::logquant;
    const UserDensity f = UserDensity::uniform_box(Cell::box(d, 1.0));
    const RateParams p{1.0, 2.0, n, d};
    const OptimizeResult res = optimize_deployment(f, p, c);
    const Estimate v = res.trace.best().final_value;
    ZetaStarEstimate z;
    z.d = d;
    z.n = n;
    z.value = v.value - std::log(static_cast<double>(n)) / static_cast<double>(d);
    z.std_error = v.std_error;
    z.ci_low = z.value - 1.96 * z.std_error;
    z.ci_high = z.value + 1.96 * z.std_error;
    return z;
}

} // namespace dmimo
