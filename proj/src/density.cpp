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

#include "dmimo/density.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dmimo
{

namespace
{

constexpr double beta25_peak = 2.4576; // 30 (1/5) (4/5)^4

double beta25_pdf(double t) noexcept
{
    if (t < 0.0 || t > 1.0)
        return 0.0;
    const double s = 1.0 - t;
    return 30.0 * t * s * s * s * s;
}

double beta25_cdf(double t) noexcept
{
    if (t <= 0.0)
        return 0.0;
    if (t >= 1.0)
        return 1.0;
    const double s = 1.0 - t;
    return 1.0 - s * s * s * s * s * (1.0 + 5.0 * t);
}

template <class Cdf>
double bisect_quantile(Cdf &&cdf, double q, double lo, double hi)
{
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (cdf(mid) < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

class DensityMap final : public UnitCubeMap
{
  public:
    explicit DensityMap(const UserDensity &f) : f_(f) {}
    std::size_t dim() const override { return f_.dim(); }
    double map(std::span<const double> v, std::span<double> out) const override { return f_.from_unit_cube(v, out); }

  private:
    const UserDensity &f_;
};

} // namespace

std::string to_string(DensityKind k)
{
    switch (k)
    {
    case DensityKind::uniform_box:
        return "uniform";
    case DensityKind::beta25:
        return "beta25";
    case DensityKind::gaussian2d:
        return "gaussian2d";
    case DensityKind::tabulated:
        return "tabulated";
    }
    return "unknown";
}

UserDensity UserDensity::uniform_box(const Cell &cell)
{
    if (!cell.bounded())
        throw std::invalid_argument("uniform density requires a box cell");
    return {DensityKind::uniform_box, cell};
}

UserDensity UserDensity::beta25(double origin)
{
    return {DensityKind::beta25, Cell::box(1, 1.0, {origin})};
}

UserDensity UserDensity::gaussian2d(std::vector<double> center)
{
    if (center.size() != 2)
        throw std::invalid_argument("gaussian2d density: center must be 2-dimensional");
    UserDensity f(DensityKind::gaussian2d, Cell::whole_space(2));
    f.center_ = std::move(center);
    return f;
}

UserDensity UserDensity::tabulated(std::size_t d, double side, std::size_t resolution, std::vector<double> values,
                                   std::vector<double> origin)
{
    if (resolution < 2)
        throw std::invalid_argument("tabulated density: resolution must be at least 2");
    std::size_t nodes = 1;
    for (std::size_t a = 0; a < d; ++a)
        nodes *= resolution;
    if (values.size() != nodes)
        throw std::invalid_argument("tabulated density: expected resolution^d = " + std::to_string(nodes) +
                                    " grid values, got " + std::to_string(values.size()));
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("tabulated density: grid values must be finite and non-negative");

    UserDensity f(DensityKind::tabulated, Cell::box(d, side, std::move(origin)));
    f.resolution_ = resolution;

    // Trapezoid weights integrate the multilinear interpolant exactly.
    const double h = side / static_cast<double>(resolution - 1);
    auto mass_of = [&](const std::vector<double> &vals)
    {
        CompensatedSum mass;
        for (std::size_t i = 0; i < nodes; ++i)
        {
            double w = 1.0;
            std::size_t rem = i;
            for (std::size_t a = 0; a < d; ++a)
            {
                const std::size_t j = rem % resolution;
                rem /= resolution;
                w *= (j == 0 || j == resolution - 1) ? 0.5 * h : h;
            }
            mass.add(w * vals[i]);
        }
        return mass.value();
    };
    const double mass = mass_of(values);
    if (!(mass > 0.0))
        throw std::invalid_argument("tabulated density: grid has zero mass");
    for (double &v : values)
        v /= mass;
    if (std::abs(mass_of(values) - 1.0) > 1e-6)
        throw std::runtime_error("tabulated density: renormalization failed");
    f.table_max_ = *std::max_element(values.begin(), values.end());
    f.table_ = std::move(values);
    return f;
}

double UserDensity::table_pdf(std::span<const double> u) const
{
    const std::size_t d = dim();
    if (!support_.contains(u, 1e-12 * support_.side()))
        return 0.0;
    const double h = support_.side() / static_cast<double>(resolution_ - 1);
    std::vector<std::size_t> base(d);
    std::vector<double> frac(d);
    for (std::size_t a = 0; a < d; ++a)
    {
        const double t = std::clamp((u[a] - support_.origin()[a]) / h, 0.0, static_cast<double>(resolution_ - 1));
        const auto i = std::min(static_cast<std::size_t>(t), resolution_ - 2);
        base[a] = i;
        frac[a] = t - static_cast<double>(i);
    }
    double value = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner)
    {
        double w = 1.0;
        std::size_t index = 0;
        for (std::size_t a = 0; a < d; ++a)
        {
            const bool up = (corner >> a) & 1U;
            w *= up ? frac[a] : 1.0 - frac[a];
            index = index * resolution_ + base[a] + (up ? 1 : 0);
        }
        if (w != 0.0)
            value += w * table_[index];
    }
    return value;
}

double UserDensity::pdf(std::span<const double> u) const
{
    if (u.size() != dim())
        throw std::invalid_argument("pdf: dimension mismatch");
    switch (kind_)
    {
    case DensityKind::uniform_box:
        return support_.contains(u) ? 1.0 / support_.measure() : 0.0;
    case DensityKind::beta25:
        return beta25_pdf(u[0] - support_.origin()[0]);
    case DensityKind::gaussian2d:
    {
        const double dx = u[0] - center_[0], dy = u[1] - center_[1];
        return std::exp(-(dx * dx + dy * dy)) / std::numbers::pi;
    }
    case DensityKind::tabulated:
        return table_pdf(u);
    }
    return 0.0;
}

double UserDensity::sup_pdf() const noexcept
{
    switch (kind_)
    {
    case DensityKind::uniform_box:
        return 1.0 / support_.measure();
    case DensityKind::beta25:
        return beta25_peak;
    case DensityKind::gaussian2d:
        return 1.0 / std::numbers::pi;
    case DensityKind::tabulated:
        return table_max_;
    }
    return 0.0;
}

std::optional<double> UserDensity::closed_form_entropy() const
{
    switch (kind_)
    {
    case DensityKind::uniform_box:
        return static_cast<double>(dim()) * std::log(support_.side());
    case DensityKind::beta25:
        return 35.0 / 12.0 - std::log(30.0);
    case DensityKind::gaussian2d:
        return std::log(std::numbers::e * std::numbers::pi);
    case DensityKind::tabulated:
        return std::nullopt;
    }
    return std::nullopt;
}

double UserDensity::length_scale() const
{
    if (kind_ == DensityKind::tabulated)
        return support_.side();
    return std::exp(*closed_form_entropy() / static_cast<double>(dim()));
}

void UserDensity::draw(CounterRng &rng, std::span<double> out) const
{
    const std::size_t d = dim();
    switch (kind_)
    {
    case DensityKind::uniform_box:
        for (std::size_t a = 0; a < d; ++a)
            out[a] = support_.origin()[a] + support_.side() * rng.uniform();
        return;
    case DensityKind::beta25:
        out[0] = inverse_cdf(rng.uniform());
        return;
    case DensityKind::gaussian2d:
        for (std::size_t a = 0; a < 2; ++a)
            out[a] = center_[a] + rng.normal() / std::numbers::sqrt2;
        return;
    case DensityKind::tabulated:
        for (;;)
        {
            for (std::size_t a = 0; a < d; ++a)
                out[a] = support_.origin()[a] + support_.side() * rng.uniform();
            if (rng.uniform() * table_max_ <= table_pdf(out))
                return;
        }
    }
}

double UserDensity::from_unit_cube(std::span<const double> v, std::span<double> out) const
{
    const std::size_t d = dim();
    switch (kind_)
    {
    case DensityKind::uniform_box:
        for (std::size_t a = 0; a < d; ++a)
            out[a] = support_.origin()[a] + support_.side() * v[a];
        return 1.0;
    case DensityKind::beta25:
        out[0] = inverse_cdf(v[0]);
        return 1.0;
    case DensityKind::gaussian2d:
    {
        static const boost::math::normal_distribution<double> normal;
        for (std::size_t a = 0; a < 2; ++a)
            out[a] = center_[a] + boost::math::quantile(normal, v[a]) / std::numbers::sqrt2;
        return 1.0;
    }
    case DensityKind::tabulated:
        for (std::size_t a = 0; a < d; ++a)
            out[a] = support_.origin()[a] + support_.side() * v[a];
        return table_pdf(out) * support_.measure();
    }
    return 0.0;
}

double UserDensity::cdf(double u) const
{
    if (dim() != 1)
        throw std::invalid_argument("cdf: only defined for d = 1");
    const double o = support_.origin()[0];
    switch (kind_)
    {
    case DensityKind::uniform_box:
        return std::clamp((u - o) / support_.side(), 0.0, 1.0);
    case DensityKind::beta25:
        return beta25_cdf(u - o);
    case DensityKind::tabulated:
    {
        // piecewise-linear pdf: exact trapezoid areas up to u
        const double h = support_.side() / static_cast<double>(resolution_ - 1);
        const double t = std::clamp((u - o) / h, 0.0, static_cast<double>(resolution_ - 1));
        const auto full = std::min(static_cast<std::size_t>(t), resolution_ - 1);
        double acc = 0.0;
        for (std::size_t j = 0; j < full; ++j)
            acc += 0.5 * h * (table_[j] + table_[j + 1]);
        if (full < resolution_ - 1)
        {
            const double fr = t - static_cast<double>(full);
            const double end = table_[full] + fr * (table_[full + 1] - table_[full]);
            acc += 0.5 * fr * h * (table_[full] + end);
        }
        return std::clamp(acc, 0.0, 1.0);
    }
    case DensityKind::gaussian2d:
        break;
    }
    throw std::invalid_argument("cdf: only defined for d = 1");
}

double UserDensity::inverse_cdf(double q) const
{
    if (dim() != 1)
        throw std::invalid_argument("inverse_cdf: only defined for d = 1");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("inverse_cdf: quantile must lie in [0,1]");
    const double o = support_.origin()[0];
    if (kind_ == DensityKind::uniform_box)
        return o + q * support_.side();
    if (kind_ == DensityKind::beta25)
        return o + bisect_quantile(beta25_cdf, q, 0.0, 1.0);
    return bisect_quantile([this](double u) { return cdf(u); }, q, o, o + support_.side());
}

UserDensity UserDensity::translated(std::span<const double> shift) const
{
    UserDensity f = *this;
    f.support_ = support_.translated(shift);
    if (kind_ == DensityKind::gaussian2d)
        for (std::size_t a = 0; a < 2; ++a)
            f.center_[a] += shift[a];
    return f;
}

std::vector<Point> sample(const UserDensity &f, std::size_t count, std::uint64_t seed)
{
    if (count < 1)
        throw std::invalid_argument("sample: count must be at least 1");
    std::vector<Point> out;
    out.reserve(count);
    std::vector<double> u(f.dim());
    for (std::size_t k = 0; k < count; ++k)
    {
        CounterRng rng(seed, k);
        f.draw(rng, u);
        out.emplace_back(u);
    }
    return out;
}

SampleSet draw_samples(const UserDensity &f, const QuadratureSpec &q)
{
    q.validate();
    if (q.method == QuadratureMethod::stratified)
        return stratified_unit_samples(DensityMap(f), q.samples, q.seed);

    SampleSet s;
    s.dim = f.dim();
    s.coords.resize(q.samples * s.dim);
    const std::size_t chunks = (q.samples + detail::chunk_size - 1) / detail::chunk_size;
    parallel_for_chunks(chunks,
                        [&](std::size_t c)
                        {
                            const std::size_t lo = c * detail::chunk_size;
                            const std::size_t hi = std::min(q.samples, lo + detail::chunk_size);
                            for (std::size_t k = lo; k < hi; ++k)
                            {
                                CounterRng rng(q.seed, k);
                                f.draw(rng, std::span<double>(s.coords.data() + k * s.dim, s.dim));
                            }
                        });
    return s;
}

Estimate differential_entropy(const UserDensity &f, EntropyMethod method, const QuadratureSpec &q)
{
    if (method == EntropyMethod::closed_form)
    {
        auto h = f.closed_form_entropy();
        if (!h)
            throw std::invalid_argument("differential_entropy: no closed form for a tabulated density; use monte-carlo");
        return {*h, 0.0};
    }
    const SampleSet s = draw_samples(f, q);
    return integrate_scalar(s,
                            [&f](std::size_t, std::span<const double> u)
                            {
                                const double p = f.pdf(u);
                                return p > 0.0 ? -std::log(p) : 0.0;
                            });
}

Estimate total_mass(const UserDensity &f, const QuadratureSpec &q)
{
    const Cell &c = f.support();
    if (!c.bounded())
        throw std::invalid_argument("total_mass: requires a density on a box cell");
    const SampleSet s = box_samples(c.dim(), c.side(), c.origin(), q);
    return integrate_scalar(s, [&f](std::size_t, std::span<const double> u) { return f.pdf(u); });
}

} // namespace dmimo
