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

#include "dmimo/quadrature.hpp"

#include "dmimo/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace dmimo
{

std::string to_string(QuadratureMethod m)
{
    return m == QuadratureMethod::monte_carlo ? "monte-carlo" : "stratified-monte-carlo";
}

QuadratureMethod quadrature_method_from_string(const std::string &s)
{
    if (s == "monte-carlo" || s == "mc")
        return QuadratureMethod::monte_carlo;
    if (s == "stratified-monte-carlo" || s == "stratified")
        return QuadratureMethod::stratified;
    throw std::invalid_argument("unknown quadrature method '" + s + "'");
}

void QuadratureSpec::validate() const
{
    if (samples < 1)
        throw std::invalid_argument("QuadratureSpec: samples must be at least 1");
    if (method == QuadratureMethod::stratified && samples < 2)
        throw std::invalid_argument("QuadratureSpec: stratified sampling needs at least 2 samples");
    if (!(distance_floor >= 0.0) || !std::isfinite(distance_floor))
        throw std::invalid_argument("QuadratureSpec: distance_floor must be finite and >= 0");
}

SampleSet SampleSet::translated(std::span<const double> shift) const
{
    if (shift.size() != dim)
        throw std::invalid_argument("SampleSet::translated: dimension mismatch");
    SampleSet out = *this;
    for (std::size_t k = 0; k < size(); ++k)
        for (std::size_t a = 0; a < dim; ++a)
            out.coords[k * dim + a] += shift[a];
    return out;
}

SampleSet stratified_unit_samples(const UnitCubeMap &map, std::size_t samples, std::uint64_t seed)
{
    const std::size_t d = map.dim();
    if (samples < 2)
        throw std::invalid_argument("stratified sampling needs at least 2 samples");

    auto per_axis = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(samples / 2), 1.0 / static_cast<double>(d))));
    per_axis = std::max<std::size_t>(per_axis, 1);
    auto strata_for = [d](std::size_t k)
    {
        std::size_t p = 1;
        for (std::size_t i = 0; i < d; ++i)
            p *= k;
        return p;
    };
    while (2 * strata_for(per_axis + 1) <= samples)
        ++per_axis;
    while (per_axis > 1 && 2 * strata_for(per_axis) > samples)
        --per_axis;
    const std::size_t strata = strata_for(per_axis);
    const std::size_t total = 2 * strata;

    SampleSet s;
    s.dim = d;
    s.paired = true;
    s.coords.resize(total * d);
    std::vector<double> weights(total, 1.0);
    bool unit_weights = true;

    const std::size_t chunks = (total + detail::chunk_size - 1) / detail::chunk_size;
    std::vector<char> chunk_unit(chunks, 1);
    parallel_for_chunks(chunks,
                        [&](std::size_t c)
                        {
                            std::vector<double> v(d);
                            const std::size_t lo = c * detail::chunk_size;
                            const std::size_t hi = std::min(total, lo + detail::chunk_size);
                            for (std::size_t k = lo; k < hi; ++k)
                            {
                                CounterRng rng(seed, k);
                                std::size_t rem = k / 2;
                                for (std::size_t a = d; a-- > 0;)
                                {
                                    const auto digit = static_cast<double>(rem % per_axis);
                                    rem /= per_axis;
                                    v[a] = (digit + rng.uniform()) / static_cast<double>(per_axis);
                                }
                                const double w = map.map(v, std::span<double>(s.coords.data() + k * d, d));
                                weights[k] = w;
                                if (w != 1.0)
                                    chunk_unit[c] = 0;
                            }
                        });
    for (char u : chunk_unit)
        unit_weights = unit_weights && u;
    if (!unit_weights)
        s.weights = std::move(weights);
    return s;
}

namespace
{

class BoxMap final : public UnitCubeMap
{
  public:
    BoxMap(std::size_t d, double side, std::span<const double> origin)
        : d_(d), side_(side), origin_(origin.begin(), origin.end()), volume_(std::pow(side, static_cast<double>(d)))
    {
    }
    std::size_t dim() const override { return d_; }
    double map(std::span<const double> v, std::span<double> out) const override
    {
        for (std::size_t a = 0; a < d_; ++a)
            out[a] = origin_[a] + side_ * v[a];
        return volume_;
    }

  private:
    std::size_t d_;
    double side_;
    std::vector<double> origin_;
    double volume_;
};

} // namespace

SampleSet box_samples(std::size_t d, double side, std::span<const double> origin, const QuadratureSpec &q)
{
    q.validate();
    if (origin.size() != d)
        throw std::invalid_argument("box_samples: origin dimension mismatch");
    BoxMap map(d, side, origin);
    if (q.method == QuadratureMethod::stratified)
        return stratified_unit_samples(map, q.samples, q.seed);

    SampleSet s;
    s.dim = d;
    s.coords.resize(q.samples * d);
    s.weights.assign(q.samples, std::pow(side, static_cast<double>(d)));
    std::vector<double> v(d);
    for (std::size_t k = 0; k < q.samples; ++k)
    {
        CounterRng rng(q.seed, k);
        for (std::size_t a = 0; a < d; ++a)
            v[a] = rng.uniform();
        map.map(v, std::span<double>(s.coords.data() + k * d, d));
    }
    return s;
}

namespace detail
{

VectorEstimate finish(const SampleSet &s, std::size_t m, const std::vector<std::vector<CompensatedSum>> &sums,
                      const std::vector<std::vector<CompensatedSum>> &spread)
{
    const auto n = static_cast<double>(s.size());
    VectorEstimate out;
    out.value.resize(m);
    out.std_error.resize(m);
    for (std::size_t j = 0; j < m; ++j)
    {
        CompensatedSum total, total_spread;
        for (std::size_t c = 0; c < sums.size(); ++c)
        {
            total.add(sums[c][j].value());
            total_spread.add(spread[c][j].value());
        }
        const double mean = total.value() / n;
        out.value[j] = mean;
        if (s.paired)
        {
            // est = (1/K) sum_s (a_s + b_s) / 2, var_s estimated by (a - b)^2 / 2
            const double strata = n / 2.0;
            out.std_error[j] = std::sqrt(total_spread.value() / 4.0) / strata;
        }
        else if (n > 1.0)
        {
            const double var = std::max(0.0, (total_spread.value() - n * mean * mean) / (n - 1.0));
            out.std_error[j] = std::sqrt(var / n);
        }
        else
        {
            out.std_error[j] = 0.0;
        }
    }
    return out;
}

} // namespace detail

} // namespace dmimo
