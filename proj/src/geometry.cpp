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

#include "dmimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dmimo
{

namespace
{

void require_finite(std::span<const double> v, const char *what)
{
    for (double c : v)
        if (!std::isfinite(c))
            throw std::invalid_argument(std::string(what) + ": coordinates must be finite");
}

std::size_t floor_root(std::size_t n, std::size_t d)
{
    auto power = [d](std::size_t k)
    {
        std::size_t p = 1;
        for (std::size_t i = 0; i < d; ++i)
            p *= k;
        return p;
    };
    auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d))));
    k = std::max<std::size_t>(k, 1);
    while (power(k + 1) <= n)
        ++k;
    while (k > 1 && power(k) > n)
        --k;
    return k;
}

} // namespace

Point::Point(std::vector<double> c) : coords(std::move(c))
{
    if (coords.empty())
        throw std::invalid_argument("Point: dimension must be at least 1");
    require_finite(coords, "Point");
}

Point::Point(std::initializer_list<double> c) : Point(std::vector<double>(c)) {}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    return std::sqrt(squared_distance(a, b));
}

// ---------- Cell ----------

Cell Cell::box(std::size_t d, double side, std::vector<double> origin)
{
    if (d == 0)
        throw std::invalid_argument("Cell: dimension must be at least 1");
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("Cell: box side M must be positive and finite");
    if (origin.empty())
        origin.assign(d, 0.0);
    if (origin.size() != d)
        throw std::invalid_argument("Cell: origin dimension mismatch");
    require_finite(origin, "Cell origin");
    Cell c;
    c.dim_ = d;
    c.bounded_ = true;
    c.side_ = side;
    c.origin_ = std::move(origin);
    return c;
}

Cell Cell::whole_space(std::size_t d)
{
    if (d == 0)
        throw std::invalid_argument("Cell: dimension must be at least 1");
    Cell c;
    c.dim_ = d;
    c.bounded_ = false;
    c.side_ = std::numeric_limits<double>::infinity();
    c.origin_.assign(d, 0.0);
    return c;
}

double Cell::measure() const noexcept
{
    return bounded_ ? std::pow(side_, static_cast<double>(dim_)) : std::numeric_limits<double>::infinity();
}

bool Cell::contains(std::span<const double> u, double tol) const
{
    if (u.size() != dim_)
        throw std::invalid_argument("Cell::contains: dimension mismatch");
    if (!bounded_)
        return true;
    for (std::size_t k = 0; k < dim_; ++k)
        if (u[k] < origin_[k] - tol || u[k] > origin_[k] + side_ + tol)
            return false;
    return true;
}

void Cell::project(std::span<double> u) const
{
    if (!bounded_)
        return;
    for (std::size_t k = 0; k < dim_; ++k)
        u[k] = std::clamp(u[k], origin_[k], origin_[k] + side_);
}

Cell Cell::translated(std::span<const double> shift) const
{
    if (shift.size() != dim_)
        throw std::invalid_argument("Cell::translated: dimension mismatch");
    Cell c = *this;
    if (bounded_)
        for (std::size_t k = 0; k < dim_; ++k)
            c.origin_[k] += shift[k];
    return c;
}

// ---------- Deployment ----------

Deployment::Deployment(std::size_t dim, std::vector<double> flat) : dim_(dim), coords_(std::move(flat))
{
    if (dim_ == 0)
        throw std::invalid_argument("Deployment: dimension must be at least 1");
    if (coords_.empty() || coords_.size() % dim_ != 0)
        throw std::invalid_argument("Deployment: need n >= 1 points of dimension d");
    require_finite(coords_, "Deployment");
}

Deployment Deployment::from_points(const std::vector<Point> &points)
{
    if (points.empty())
        throw std::invalid_argument("Deployment: need n >= 1 points");
    const std::size_t d = points.front().dim();
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const auto &p : points)
    {
        if (p.dim() != d)
            throw std::invalid_argument("Deployment: all points must share dimension d");
        flat.insert(flat.end(), p.coords.begin(), p.coords.end());
    }
    return {d, std::move(flat)};
}

Point Deployment::at(std::size_t i) const
{
    auto p = point(i);
    return Point(std::vector<double>(p.begin(), p.end()));
}

Deployment Deployment::translated(std::span<const double> shift) const
{
    if (shift.size() != dim_)
        throw std::invalid_argument("Deployment::translated: dimension mismatch");
    Deployment out = *this;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t k = 0; k < dim_; ++k)
            out.coords_[i * dim_ + k] += shift[k];
    return out;
}

Deployment Deployment::sorted() const
{
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [this](std::size_t a, std::size_t b)
                     {
                         auto pa = point(a);
                         auto pb = point(b);
                         return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
                     });
    std::vector<double> flat;
    flat.reserve(coords_.size());
    for (auto i : idx)
    {
        auto p = point(i);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return {dim_, std::move(flat)};
}

// ---------- Nearest point / Voronoi ----------

Nearest nearest_antenna(std::span<const double> u, const Deployment &x)
{
    if (u.size() != x.dim())
        throw std::invalid_argument("nearest_antenna: dimension mismatch between point and deployment");
    std::size_t best = 0;
    double best_sq = squared_distance(u, x.point(0));
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        const double s = squared_distance(u, x.point(i));
        if (s < best_sq)
        {
            best_sq = s;
            best = i;
        }
    }
    return {best, std::sqrt(best_sq)};
}

std::vector<Interval> voronoi_partition_1d(const Deployment &x, const Cell &cell)
{
    if (x.dim() != 1 || cell.dim() != 1)
        throw std::invalid_argument("voronoi_partition_1d: requires d = 1");
    if (!cell.bounded())
        throw std::invalid_argument("voronoi_partition_1d: requires a box cell");

    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&x](std::size_t a, std::size_t b) { return x.point(a)[0] < x.point(b)[0]; });

    const double lo = cell.origin()[0];
    const double hi = lo + cell.side();
    std::vector<Interval> cells(n);

    // Walk distinct locations in sorted order; copies after the first are empty.
    double left = lo;
    std::size_t k = 0;
    while (k < n)
    {
        std::size_t j = k;
        const double xk = x.point(order[k])[0];
        while (j + 1 < n && x.point(order[j + 1])[0] == xk)
            ++j;
        double right = hi;
        if (j + 1 < n)
            right = std::clamp(0.5 * (xk + x.point(order[j + 1])[0]), lo, hi);
        right = std::max(right, left);
        // lowest index among equal locations wins the tie
        std::size_t owner = order[k];
        for (std::size_t t = k; t <= j; ++t)
            owner = std::min(owner, order[t]);
        for (std::size_t t = k; t <= j; ++t)
            cells[order[t]] = {right, right};
        cells[owner] = {left, right};
        left = right;
        k = j + 1;
    }
    return cells;
}

// ---------- Lattice deployments ----------

Deployment square_lattice_deployment(std::size_t n, const Cell &cell)
{
    if (!cell.bounded())
        throw std::invalid_argument("square_lattice_deployment: requires a box cell");
    if (n == 0)
        throw std::invalid_argument("square_lattice_deployment: n must be at least 1");

    const std::size_t d = cell.dim();
    const std::size_t k = floor_root(n, d);
    std::size_t grid = 1;
    for (std::size_t i = 0; i < d; ++i)
        grid *= k;

    const double m = cell.side();
    std::vector<double> flat;
    flat.reserve(n * d);
    std::vector<std::size_t> digits(d);
    for (std::size_t g = 0; g < grid; ++g)
    {
        // first coordinate varies slowest
        std::size_t rem = g;
        for (std::size_t a = d; a-- > 0;)
        {
            digits[a] = rem % k;
            rem /= k;
        }
        for (std::size_t a = 0; a < d; ++a)
            flat.push_back(cell.origin()[a] + m * (2.0 * static_cast<double>(digits[a]) + 1.0) / (2.0 * static_cast<double>(k)));
    }
    for (std::size_t extra = 0; grid + extra < n; ++extra)
    {
        const std::size_t src = extra % grid;
        for (std::size_t a = 0; a < d; ++a)
            flat.push_back(flat[src * d + a]);
    }
    return {d, std::move(flat)};
}

Deployment hex_lattice_deployment(std::size_t n, const Cell &cell)
{
    if (cell.dim() != 2)
        throw std::invalid_argument("hex_lattice_deployment: requires d = 2");
    if (!cell.bounded())
        throw std::invalid_argument("hex_lattice_deployment: requires a box cell");
    if (n == 0)
        throw std::invalid_argument("hex_lattice_deployment: n must be at least 1");

    const double m = cell.side();
    const double ox = cell.origin()[0];
    const double oy = cell.origin()[1];
    const double cx = ox + 0.5 * m;
    const double cy = oy + 0.5 * m;
    const double tol = 1e-12 * m;
    const double row = std::sqrt(3.0) / 2.0;

    // hexagonal Voronoi area sqrt(3)/2 a^2 = M^2 / n
    double a = m * std::sqrt(2.0 / (std::sqrt(3.0) * static_cast<double>(n)));
    std::vector<std::pair<double, double>> pts;
    for (;;)
    {
        pts.clear();
        const long jmax = static_cast<long>(std::ceil(m / (a * row))) + 1;
        for (long j = -jmax; j <= jmax; ++j)
        {
            const double y = cy + static_cast<double>(j) * a * row;
            if (y < oy - tol || y > oy + m + tol)
                continue;
            const double shift = 0.5 * a * static_cast<double>(j);
            const long imax = static_cast<long>(std::ceil(m / a + std::abs(shift) / a)) + 1;
            for (long i = -imax; i <= imax; ++i)
            {
                const double x = cx + static_cast<double>(i) * a + shift;
                if (x < ox - tol || x > ox + m + tol)
                    continue;
                pts.emplace_back(x, y);
            }
        }
        if (pts.size() >= n)
            break;
        a *= 0.999;
    }

    auto boundary_distance = [&](const std::pair<double, double> &p)
    { return std::min({p.first - ox, ox + m - p.first, p.second - oy, oy + m - p.second}); };
    // keep the n most interior points; exact ties fall back to lattice order
    std::stable_sort(pts.begin(), pts.end(),
                     [&](const auto &p, const auto &q) { return boundary_distance(p) > boundary_distance(q) + tol; });
    pts.resize(n);
    std::sort(pts.begin(), pts.end(),
              [](const auto &p, const auto &q) { return p.second < q.second || (p.second == q.second && p.first < q.first); });

    std::vector<double> flat;
    flat.reserve(2 * n);
    for (const auto &[x, y] : pts)
    {
        flat.push_back(std::clamp(x, ox, ox + m));
        flat.push_back(std::clamp(y, oy, oy + m));
    }
    return {2, std::move(flat)};
}

// ---------- Lattice sums ----------

LatticeSpec::LatticeSpec(Kind kind, std::size_t d, double beta, std::vector<double> basis)
    : kind_(kind), dim_(d), beta_(beta), basis_(std::move(basis))
{
    if (d == 0)
        throw std::invalid_argument("LatticeSpec: dimension must be at least 1");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("LatticeSpec: beta must be positive");
    if (basis_.size() != d * d)
        throw std::invalid_argument("LatticeSpec: basis must be d x d");

    // determinant by Gaussian elimination with partial pivoting
    std::vector<double> a = basis_;
    double det = 1.0;
    for (std::size_t c = 0; c < d; ++c)
    {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < d; ++r)
            if (std::abs(a[r * d + c]) > std::abs(a[piv * d + c]))
                piv = r;
        if (a[piv * d + c] == 0.0)
        {
            det = 0.0;
            break;
        }
        if (piv != c)
        {
            for (std::size_t k = 0; k < d; ++k)
                std::swap(a[c * d + k], a[piv * d + k]);
            det = -det;
        }
        det *= a[c * d + c];
        for (std::size_t r = c + 1; r < d; ++r)
        {
            const double f = a[r * d + c] / a[c * d + c];
            for (std::size_t k = c; k < d; ++k)
                a[r * d + k] -= f * a[c * d + k];
        }
    }
    if (std::abs(std::abs(det) - 1.0) > 1e-12)
        throw std::invalid_argument("LatticeSpec: basis must have unit determinant");
}

LatticeSpec LatticeSpec::integer(std::size_t d, double beta)
{
    std::vector<double> eye(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        eye[i * d + i] = 1.0;
    return {Kind::integer, d, beta, std::move(eye)};
}

LatticeSpec LatticeSpec::hexagonal(double beta)
{
    // generators (c, 0) and (c/2, c sqrt(3)/2) with c^2 sqrt(3)/2 = 1
    const double c = std::sqrt(2.0 / std::sqrt(3.0));
    return {Kind::hexagonal, 2, beta, {c, 0.5 * c, 0.0, 0.5 * std::sqrt(3.0) * c}};
}

LatticeSpec LatticeSpec::custom(std::size_t d, double beta, std::vector<double> basis)
{
    return {Kind::custom, d, beta, std::move(basis)};
}

void LatticeSpec::point(std::span<const long> z, std::span<double> out) const
{
    for (std::size_t r = 0; r < dim_; ++r)
    {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c)
            s += basis_[r * dim_ + c] * static_cast<double>(z[c]);
        out[r] = beta_ * s;
    }
}

double lattice_sum_ratio(std::span<const double> u, const LatticeSpec &lattice, double r, long radius)
{
    const std::size_t d = lattice.dim();
    if (u.size() != d)
        throw std::invalid_argument("lattice_sum_ratio: dimension mismatch");
    if (!(r > static_cast<double>(d)))
        throw std::invalid_argument("lattice_sum_ratio: requires r > d for the lattice sum to converge");
    if (radius < 2)
        throw std::invalid_argument("lattice_sum_ratio: truncation radius must be at least 2");

    std::vector<long> z(d, -radius);
    std::vector<double> x(d);
    double min_sq = std::numeric_limits<double>::infinity();
    // Terms are accumulated as (|u-x|^2 / min^2)^(-r/2) in a second pass so
    // that large r does not overflow.
    std::vector<double> sq;
    for (;;)
    {
        lattice.point(z, x);
        const double s = squared_distance(u, x);
        if (s == 0.0)
            throw std::invalid_argument("lattice_sum_ratio: u coincides with a lattice point");
        sq.push_back(s);
        min_sq = std::min(min_sq, s);

        std::size_t k = 0;
        while (k < d && z[k] == radius)
            z[k++] = -radius;
        if (k == d)
            break;
        ++z[k];
    }

    std::sort(sq.begin(), sq.end(), std::greater<>());
    if (sq[sq.size() - 2] <= min_sq * (1.0 + 1e-12))
        throw std::invalid_argument("lattice_sum_ratio: u is equidistant from two nearest lattice points");
    double sum = 0.0;
    for (double s : sq)
        sum += std::pow(s / min_sq, -0.5 * r);
    return sum;
}

} // namespace dmimo
