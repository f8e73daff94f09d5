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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "cli.hpp"
#include "dmimo/asymptotics.hpp"
#include "dmimo/channel.hpp"
#include "dmimo/density.hpp"
#include "dmimo/geometry.hpp"
#include "dmimo/placement.hpp"
#include "dmimo/random.hpp"
#include "dmimo/rate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace dmimo;
using cli::Json;

namespace
{

struct Verdict
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok)
        {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

std::string fmt(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

const double log2e = 1.0 + std::log(2.0);

// Optimizer budget shared by the sweep criteria.
Json sweep_config(const Json &density, double r, const std::vector<std::size_t> &grid, std::size_t restarts,
                  std::size_t max_iters)
{
    Json raw = {{"density", density},
                {"P", 1.0},
                {"r", r},
                {"n_grid", grid},
                {"quadrature", {{"samples", 50000}}},
                {"optimizer", {{"restarts", restarts}, {"max_iters", max_iters}, {"tol", 1e-3}}}};
    return cli::resolve_config("sweep", raw);
}

std::vector<cli::SweepRow> sweep_rows_cached(const Json &cfg)
{
    static std::vector<std::pair<std::string, std::vector<cli::SweepRow>>> cache;
    const std::string key = cfg.dump();
    for (const auto &[k, rows] : cache)
        if (k == key)
            return rows;
    cache.emplace_back(key, cli::sweep_rows(cfg));
    return cache.back().second;
}

const Json uniform1 = {{"kind", "uniform"}, {"d", 1}};
std::vector<std::size_t> full_grid(std::size_t lo, std::size_t hi)
{
    std::vector<std::size_t> g;
    for (std::size_t n = lo; n <= hi; ++n)
        g.push_back(n);
    return g;
}

const std::vector<std::size_t> sweep_grid = full_grid(2, 32);

std::vector<std::vector<cli::SweepRow>> fig1_rows()
{
    std::vector<std::vector<cli::SweepRow>> out;
    for (double r : {2.0, 4.0, 8.0})
        out.push_back(sweep_rows_cached(sweep_config(uniform1, r, sweep_grid, 1, 500)));
    return out;
}

void c1(Verdict &v)
{
    const auto f = UserDensity::uniform_box(Cell::box(1, 1.0));
    OptimizeConfig cfg;
    cfg.objective = ObjectiveKind::logquant;
    cfg.restarts = 2;
    cfg.quadrature.samples = 200000;
    double worst_value = 0.0, worst_linf = 0.0;
    for (std::size_t n = 1; n <= 8; ++n)
    {
        const OptimizeResult res = optimize_deployment(f, {1.0, 2.0, n, 1}, cfg);
        const double value = res.trace.best().final_value.value;
        const double gap = std::abs(value - (std::log(static_cast<double>(n)) + log2e));
        const Deployment sorted = res.deployment.sorted();
        double linf = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            linf = std::max(linf, std::abs(sorted.point(i)[0] - (2.0 * i + 1.0) / (2.0 * n)));
        v.require(gap <= 1e-2, "value n=" + std::to_string(n));
        v.require(linf <= 1e-3, "midpoints n=" + std::to_string(n));
        worst_value = std::max(worst_value, gap);
        worst_linf = std::max(worst_linf, linf);
    }
    v.detail << "max |R~ - (log n + log 2e)| = " << fmt(worst_value, 3) << ", max linf to midpoints = "
             << fmt(worst_linf, 3);
}

void c2(Verdict &v)
{
    const auto rows = fig1_rows();
    const double rs[] = {2.0, 4.0, 8.0};
    for (std::size_t k = 0; k < 3; ++k)
    {
        double worst = 0.0;
        for (const auto &row : rows[k])
        {
            const double gap = std::abs(row.rate - row.predicted);
            if (rs[k] == 2.0)
                v.require(gap <= 0.6, "r=2 n=" + std::to_string(row.n));
            else if (row.n >= 8)
                v.require(gap <= 0.15, "r=" + fmt(rs[k]) + " n=" + std::to_string(row.n));
            if (rs[k] == 2.0 || row.n >= 8)
                worst = std::max(worst, gap);
        }
        v.detail << "r=" << fmt(rs[k]) << " max gap " << fmt(worst, 3) << "; ";
    }
}

void c3(Verdict &v)
{
    const auto rows = sweep_rows_cached(sweep_config({{"kind", "beta25"}}, 4.0, {8, 64}, 2, 500));
    const double g8 = std::abs(rows[0].rate - rows[0].predicted);
    const double g64 = std::abs(rows[1].rate - rows[1].predicted);
    v.require(g64 < g8, "gap(64) < gap(8)");
    v.detail << "gap n=8 " << fmt(g8, 4) << ", gap n=64 " << fmt(g64, 4);
}

void c4(Verdict &v)
{
    const auto rows = sweep_rows_cached(sweep_config(uniform1, 4.0, {32, 64, 128, 256}, 1, 40));
    std::vector<double> n, rate;
    for (const auto &row : rows)
    {
        n.push_back(static_cast<double>(row.n));
        rate.push_back(row.rate);
    }
    const RhoFit fit = estimate_rho(n, rate);
    v.require(fit.slope >= 2.7 && fit.slope <= 3.3, "slope in [2.7, 3.3]");

    const auto plane = sweep_rows_cached(sweep_config({{"kind", "uniform"}, {"d", 2}}, 2.0, {16, 64}, 1, 500));
    const double growth = plane[1].rate - plane[0].rate;
    v.require(growth <= 0.3, "d=2 r=2 growth <= 0.3");
    v.detail << "rho_hat " << fmt(fit.slope, 4) << "; d=2 R(64)-R(16) = " << fmt(growth, 4);
}

void c5(Verdict &v)
{
    QuadratureSpec q;
    q.samples = 1000000;
    const Estimate hex = zeta_region(MomentRegion::hexagon(), q);
    const Estimate sq = zeta_region(MomentRegion::cube(2), q);
    const Estimate iv = zeta_region(MomentRegion::interval(), q);
    const double ball = zeta_ball(2);
    v.require(std::abs(hex.value - 1.070485) <= 5e-4, "hexagon");
    v.require(std::abs(sq.value - 1.061176) <= 5e-4, "square");
    v.require(std::abs(iv.value - 1.693147) <= 5e-4, "interval");
    v.require(std::abs(ball - 1.072365) <= 5e-7, "ball closed form");
    v.require(zeta_cube(2) < *zeta_star(2) && *zeta_star(2) < ball, "ordering");
    v.detail << "hexagon " << fmt(hex.value, 7) << ", square " << fmt(sq.value, 7) << ", interval "
             << fmt(iv.value, 7) << ", ball " << fmt(ball, 7);
}

void c6(Verdict &v)
{
    std::size_t checked = 0;
    auto check = [&](const std::vector<cli::SweepRow> &rows, const std::string &tag)
    {
        for (const auto &row : rows)
        {
            if (std::isnan(row.lower) || std::isnan(row.upper))
                continue;
            const double slack = 3.0 * row.rate_stderr;
            v.require(row.lower <= row.rate + slack, "LB " + tag + " n=" + std::to_string(row.n));
            v.require(row.rate <= row.upper + slack, "UB " + tag + " n=" + std::to_string(row.n));
            ++checked;
        }
    };
    const auto rows = fig1_rows();
    check(rows[0], "r=2");
    check(rows[1], "r=4");
    check(rows[2], "r=8");
    check(sweep_rows_cached(sweep_config({{"kind", "beta25"}}, 4.0, {8, 64}, 2, 500)), "beta25");
    check(sweep_rows_cached(sweep_config({{"kind", "uniform"}, {"d", 2}}, 2.0, {16, 64}, 1, 500)), "d=2");
    v.require(checked > 0, "rows checked");
    v.detail << checked << " sweep rows inside [LB, UB] up to 3 sigma";
}

void c7(Verdict &v)
{
    const std::vector<double> u{0.25};
    const auto z = LatticeSpec::integer(1);
    const double r2 = lattice_sum_ratio(u, z, 2.0, 100000);
    // sum_k (u - k)^-2 = pi^2 / sin^2(pi u), divided by u^-2
    const double oracle = std::pow(std::numbers::pi * 0.25 / std::sin(std::numbers::pi * 0.25), 2.0);
    const double r8 = lattice_sum_ratio(u, z, 8.0), r16 = lattice_sum_ratio(u, z, 16.0),
                 r32 = lattice_sum_ratio(u, z, 32.0);
    v.require(std::abs(r2 - oracle) <= 1e-3 && std::abs(r2 - 1.2337) <= 1e-3, "ratio(r=2)");
    v.require(r16 <= 1.0 + 1e-6, "ratio(r=16)");
    v.require(r8 > r16 && r16 > r32, "decreasing in r");
    v.detail << "ratio r=2 " << fmt(r2, 8) << " (series " << fmt(oracle, 8) << "), r=16 - 1 = " << fmt(r16 - 1.0, 3);
}

void c8(Verdict &v)
{
    const double floor = 1e-3, h = 1e-6;
    double worst = 0.0;
    CounterRng rng(2024, 0);
    for (int trial = 0; trial < 20; ++trial)
    {
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 2);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
        const double r = 1.0 + 4.0 * rng.uniform();
        const double P = 0.5 + 2.0 * rng.uniform();
        std::vector<double> flat(n * d);
        for (double &c : flat)
            c = rng.uniform();
        const Deployment x(d, flat);
        const RateParams p{P, r, n, d};
        QuadratureSpec q;
        q.samples = 20000;
        q.seed = 100 + static_cast<std::uint64_t>(trial);
        const SampleSet s = draw_samples(UserDensity::uniform_box(Cell::box(d, 1.0)), q);

        const GradientEstimate g = average_rate_grad(x, s, p, floor);
        const GradientEstimate gq = quantizer_objective_grad(x, s, floor);
        double err = 0.0, errq = 0.0;
        for (std::size_t i = 0; i < n * d; ++i)
        {
            Deployment up = x, down = x;
            up.flat()[i] += h;
            down.flat()[i] -= h;
            const double fd = (average_rate(up, s, p, floor).value - average_rate(down, s, p, floor).value) / (2 * h);
            const double fq =
                (quantizer_objective(up, s, floor).value - quantizer_objective(down, s, floor).value) / (2 * h);
            err = std::max(err, std::abs(fd - g.value[i]));
            errq = std::max(errq, std::abs(fq - gq.value[i]));
        }
        const double rel = std::max(err / g.norm(), errq / gq.norm());
        v.require(rel <= 1e-4, "configuration " + std::to_string(trial));
        worst = std::max(worst, rel);
    }
    v.detail << "20 configurations, worst relative error " << fmt(worst, 3);
}

void c9(Verdict &v)
{
    const Deployment x = square_lattice_deployment(4, Cell::box(1, 1.0));
    const std::vector<Point> users{Point({0.1}), Point({0.35}), Point({0.6}), Point({0.85})};
    const RateParams p{1.0, 4.0, 4, 1};
    double worst_rel = 0.0;
    const ZfResult z = zf_rate_monte_carlo(x, users, p, {1024, 4, 200, derive_seed(1, 1024)});
    for (std::size_t j = 0; j < 4; ++j)
    {
        const double e = std::abs(z.mean[j] - z.limit[j]);
        v.require(e <= 0.05 * z.limit[j], "user " + std::to_string(j) + " within 5%");
        worst_rel = std::max(worst_rel, e / z.limit[j]);
    }

    // monotone convergence in N, measured with a larger trial count
    const std::size_t trials = 20000;
    std::vector<std::vector<double>> errors;
    for (std::size_t N : {64u, 256u, 1024u})
    {
        const ZfResult big = zf_rate_monte_carlo(x, users, p, {N, 4, trials, derive_seed(1, N)});
        std::vector<double> e;
        for (std::size_t j = 0; j < 4; ++j)
            e.push_back(std::abs(big.mean[j] - big.limit[j]));
        errors.push_back(e);
    }
    for (std::size_t j = 0; j < 4; ++j)
        v.require(errors[1][j] <= errors[0][j] && errors[2][j] <= errors[1][j],
                  "user " + std::to_string(j) + " non-increasing");
    v.detail << "200 trials: worst relative error at N=1024 " << fmt(worst_rel, 3) << "; " << trials
             << " trials: user 0 errors " << fmt(errors[0][0], 3) << " / " << fmt(errors[1][0], 3) << " / "
             << fmt(errors[2][0], 3);
}

void c10(Verdict &v)
{
    QuadratureSpec q;
    q.samples = 1000000;
    const Estimate beta = differential_entropy(UserDensity::beta25(), EntropyMethod::monte_carlo, q);
    const Estimate gauss = differential_entropy(UserDensity::gaussian2d(), EntropyMethod::monte_carlo, q);
    const double target = std::log(std::numbers::e * std::numbers::pi);
    v.require(std::abs(beta.value + 0.48453) <= 1e-3, "beta25");
    v.require(std::abs(gauss.value - target) <= 1e-3, "gaussian2d");
    v.detail << "beta25 " << fmt(beta.value, 7) << ", gaussian2d " << fmt(gauss.value, 7) << " (log(e pi) "
             << fmt(target, 7) << ")";
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Verdict &)>>> criteria{
        {"d=1 quantizer law", c1},       {"uniform gap bound", c2},      {"non-uniform convergence", c3},
        {"macromultiplexing slope", c4}, {"moment constants", c5},       {"bound sandwich", c6},
        {"lattice sum ratio", c7},       {"gradient correctness", c8},   {"zero-forcing convergence", c9},
        {"entropy", c10}};
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k)
    {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try
        {
            criteria[k].second(v);
        }
        catch (const std::exception &e)
        {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += v.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    v.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
