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

#ifndef DMIMO_QUADRATURE_HPP
#define DMIMO_QUADRATURE_HPP

#include "dmimo/parallel.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dmimo
{

enum class QuadratureMethod
{
    monte_carlo,
    stratified
};

std::string to_string(QuadratureMethod m);
QuadratureMethod quadrature_method_from_string(const std::string &s);

// Governs every integral estimate: method, sample budget, seed and the
// distance floor applied to |u - x| inside singular integrands.
struct QuadratureSpec
{
    QuadratureMethod method = QuadratureMethod::stratified;
    std::size_t samples = 200000;
    std::uint64_t seed = 1;
    double distance_floor = 1e-9;

    void validate() const;
    QuadratureSpec with_seed(std::uint64_t s) const
    {
        QuadratureSpec q = *this;
        q.seed = s;
        return q;
    }
};

struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
};

// Fixed set of integration nodes. Integrals are estimated as the (weighted)
// sample mean; with `paired` set, consecutive samples 2s and 2s+1 share an
// equal-volume stratum and the standard error is computed from the pairs.
struct SampleSet
{
    std::size_t dim = 1;
    std::vector<double> coords;
    std::vector<double> weights; // empty means unit weights
    bool paired = false;

    std::size_t size() const noexcept { return coords.size() / dim; }
    std::span<const double> point(std::size_t k) const { return {coords.data() + k * dim, dim}; }
    double weight(std::size_t k) const { return weights.empty() ? 1.0 : weights[k]; }
    SampleSet translated(std::span<const double> shift) const;
};

// Maps a point of the unit cube [0,1)^d to an integration node and its weight.
// Used to build stratified sets through an inverse transform.
struct UnitCubeMap
{
    virtual ~UnitCubeMap() = default;
    virtual std::size_t dim() const = 0;
    virtual double map(std::span<const double> v, std::span<double> out) const = 0;
};

// Jittered grid with k^d strata, k = floor((samples/2)^(1/d)), two nodes per
// stratum; the set therefore has 2k^d <= samples nodes.
SampleSet stratified_unit_samples(const UnitCubeMap &map, std::size_t samples, std::uint64_t seed);

// Uniform nodes over the cube [origin, origin + side]^d with weight side^d, so
// that the weighted mean estimates the integral over the box.
SampleSet box_samples(std::size_t d, double side, std::span<const double> origin, const QuadratureSpec &q);

struct VectorEstimate
{
    std::vector<double> value;
    std::vector<double> std_error;

    Estimate operator[](std::size_t i) const { return {value[i], std_error[i]}; }
};

namespace detail
{
constexpr std::size_t chunk_size = 4096; // even, so pairs never straddle chunks

VectorEstimate finish(const SampleSet &s, std::size_t m, const std::vector<std::vector<CompensatedSum>> &sums,
                      const std::vector<std::vector<CompensatedSum>> &spread);
} // namespace detail

// Estimates m integrals at once. eval(k, u, out) writes the m integrand values
// at node k into out; node weights are applied here. Work is split into fixed
// chunks reduced in chunk order, so the result is bit-identical for any thread
// count.
template <class Eval>
VectorEstimate integrate(const SampleSet &s, std::size_t m, Eval &&eval)
{
    const std::size_t n = s.size();
    const std::size_t chunks = (n + detail::chunk_size - 1) / detail::chunk_size;
    std::vector<std::vector<CompensatedSum>> sums(chunks, std::vector<CompensatedSum>(m));
    std::vector<std::vector<CompensatedSum>> spread(chunks, std::vector<CompensatedSum>(m));

    parallel_for_chunks(chunks,
                        [&](std::size_t c)
                        {
                            std::vector<double> a(m), b(m);
                            const std::size_t lo = c * detail::chunk_size;
                            const std::size_t hi = std::min(n, lo + detail::chunk_size);
                            auto &sum = sums[c];
                            auto &spr = spread[c];
                            if (s.paired)
                            {
                                for (std::size_t k = lo; k + 1 < hi; k += 2)
                                {
                                    eval(k, s.point(k), std::span<double>(a));
                                    eval(k + 1, s.point(k + 1), std::span<double>(b));
                                    const double wa = s.weight(k), wb = s.weight(k + 1);
                                    for (std::size_t j = 0; j < m; ++j)
                                    {
                                        const double va = wa * a[j], vb = wb * b[j];
                                        sum[j].add(va);
                                        sum[j].add(vb);
                                        spr[j].add((va - vb) * (va - vb));
                                    }
                                }
                            }
                            else
                            {
                                for (std::size_t k = lo; k < hi; ++k)
                                {
                                    eval(k, s.point(k), std::span<double>(a));
                                    const double w = s.weight(k);
                                    for (std::size_t j = 0; j < m; ++j)
                                    {
                                        const double v = w * a[j];
                                        sum[j].add(v);
                                        spr[j].add(v * v);
                                    }
                                }
                            }
                        });
    return detail::finish(s, m, sums, spread);
}

template <class Eval>
Estimate integrate_scalar(const SampleSet &s, Eval &&eval)
{
    auto v = integrate(s, 1, [&](std::size_t k, std::span<const double> u, std::span<double> out) { out[0] = eval(k, u); });
    return v[0];
}

// Smooth distance floor: identity for t >= eps, (t^2 + eps^2) / (2 eps) below,
// matching value and slope at t = eps. Never below eps / 2 for eps > 0.
struct FlooredDistance
{
    double value; // floored distance
    double slope; // d value / d t
};

inline FlooredDistance floor_distance(double t, double eps) noexcept
{
    if (t >= eps)
        return {t, 1.0};
    return {(t * t + eps * eps) / (2.0 * eps), t / eps};
}

} // namespace dmimo

#endif
