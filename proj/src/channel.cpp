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

#include "dmimo/channel.hpp"

#include "dmimo/parallel.hpp"
#include "dmimo/random.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

namespace dmimo
{

void ChannelParams::validate(std::size_t n) const
{
    if (n < 1)
        throw std::invalid_argument("ChannelParams: deployment is empty");
    if (N < 1 || N % n != 0)
        throw std::invalid_argument("ChannelParams: N must be a positive multiple of n");
    if (m < 1 || m > N)
        throw std::invalid_argument("ChannelParams: m must lie in [1, N]");
    if (trials < 1)
        throw std::invalid_argument("ChannelParams: trials must be at least 1");
}

double limit_gain_grouped(const Deployment &x, std::span<const double> u, double r, std::size_t N)
{
    const std::size_t n = x.size();
    if (N < 1 || N % n != 0)
        throw std::invalid_argument("limit_gain_grouped: N must be a positive multiple of n");
    const std::size_t per = N / n;
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double g = inverse_power_sq(squared_distance(x.point(i), u), r);
        for (std::size_t l = 0; l < per; ++l)
            s.add(g);
    }
    return s.value() / static_cast<double>(N);
}

double limit_gain(const Deployment &x, std::span<const double> u, double r)
{
    CompensatedSum s;
    for (std::size_t i = 0; i < x.size(); ++i)
        s.add(inverse_power_sq(squared_distance(x.point(i), u), r));
    return s.value() / static_cast<double>(x.size());
}

namespace
{

struct Trial
{
    std::vector<double> zf;
    double mr = 0.0;
    bool singular = false;
};

} // namespace

ZfResult zf_rate_monte_carlo(const Deployment &x, const std::vector<Point> &users, const RateParams &p,
                             const ChannelParams &c)
{
    p.validate();
    p.check_deployment(x);
    c.validate(x.size());
    const std::size_t n = x.size(), m = users.size(), N = c.N, per = N / n;
    if (m != c.m)
        throw std::invalid_argument("zf_rate_monte_carlo: ChannelParams::m does not match the user count");

    // amplitude scale per (site, user)
    Eigen::MatrixXd sigma(n, m);
    for (std::size_t j = 0; j < m; ++j)
    {
        if (users[j].dim() != x.dim())
            throw std::invalid_argument("zf_rate_monte_carlo: user dimension mismatch");
        for (std::size_t i = 0; i < n; ++i)
        {
            const double sq = squared_distance(x.point(i), users[j].view());
            if (sq == 0.0)
                throw std::invalid_argument("zf_rate_monte_carlo: user coincides with an antenna site");
            sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::sqrt(inverse_power_sq(sq, p.r) / 2.0);
        }
    }

    const double snr = p.P / static_cast<double>(N);
    std::vector<Trial> trials(c.trials);
    parallel_for_chunks(c.trials,
                        [&](std::size_t t)
                        {
                            CounterRng rng(derive_seed(c.seed, t), 0);
                            Eigen::MatrixXcd H(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(m));
                            for (std::size_t j = 0; j < m; ++j)
                                for (std::size_t row = 0; row < N; ++row)
                                {
                                    const double s = sigma(static_cast<Eigen::Index>(row / per),
                                                           static_cast<Eigen::Index>(j));
                                    const double re = rng.normal(), im = rng.normal();
                                    H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = {s * re, s * im};
                                }
                            const Eigen::MatrixXcd G = H.adjoint() * H;
                            Eigen::LLT<Eigen::MatrixXcd> llt(G);
                            Trial &out = trials[t];
                            if (llt.info() != Eigen::Success)
                            {
                                out.singular = true;
                                return;
                            }
                            const Eigen::MatrixXcd inv =
                                llt.solve(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(m),
                                                                     static_cast<Eigen::Index>(m)));
                            out.zf.resize(m);
                            for (std::size_t j = 0; j < m; ++j)
                            {
                                const double dj = inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
                                if (!(dj > 0.0) || !std::isfinite(dj))
                                {
                                    out.singular = true;
                                    return;
                                }
                                out.zf[j] = std::log1p(snr / dj);
                            }
                            if (m == 1)
                                out.mr = std::log1p(snr * H.col(0).squaredNorm());
                        });

    ZfResult res;
    res.mean.assign(m, 0.0);
    res.std_error.assign(m, 0.0);
    std::vector<CompensatedSum> sum(m), sum_sq(m);
    for (const Trial &t : trials)
    {
        if (t.singular)
        {
            ++res.discarded;
            continue;
        }
        ++res.kept;
        for (std::size_t j = 0; j < m; ++j)
        {
            sum[j].add(t.zf[j]);
            sum_sq[j].add(t.zf[j] * t.zf[j]);
            res.trial_rates.push_back(t.zf[j]);
        }
        if (m == 1)
            res.mr_rates.push_back(t.mr);
    }
    if (res.kept == 0)
        throw std::runtime_error("zf_rate_monte_carlo: every trial had a singular Gram matrix");
    const auto k = static_cast<double>(res.kept);
    for (std::size_t j = 0; j < m; ++j)
    {
        const double mean = sum[j].value() / k;
        res.mean[j] = mean;
        if (res.kept > 1)
            res.std_error[j] = std::sqrt(std::max(0.0, (sum_sq[j].value() - k * mean * mean) / (k - 1.0)) / k);
        res.limit.push_back(rate_at_point(users[j], x, p));
    }
    return res;
}

} // namespace dmimo
