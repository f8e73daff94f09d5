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

#include "dmimo/placement.hpp"

#include "dmimo/parallel.hpp"
#include "dmimo/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace dmimo
{

std::string to_string(ObjectiveKind k)
{
    return k == ObjectiveKind::rate ? "rate" : "logquant";
}

ObjectiveKind objective_from_string(const std::string &s)
{
    if (s == "rate")
        return ObjectiveKind::rate;
    if (s == "logquant")
        return ObjectiveKind::logquant;
    throw std::invalid_argument("unknown objective '" + s + "' (expected rate or logquant)");
}

void OptimizeConfig::validate() const
{
    if (restarts < 1)
        throw std::invalid_argument("OptimizeConfig: restarts must be at least 1");
    if (max_iters < 1)
        throw std::invalid_argument("OptimizeConfig: max_iters must be at least 1");
    if (!(initial_step > 0.0))
        throw std::invalid_argument("OptimizeConfig: initial_step must be positive");
    if (!(shrink > 0.0 && shrink < 1.0))
        throw std::invalid_argument("OptimizeConfig: shrink must lie in (0,1)");
    if (!(sufficient_increase >= 0.0 && sufficient_increase < 1.0))
        throw std::invalid_argument("OptimizeConfig: sufficient_increase must lie in [0,1)");
    if (!(tol >= 0.0))
        throw std::invalid_argument("OptimizeConfig: tol must be >= 0");
    if (!(search_floor >= 0.0))
        throw std::invalid_argument("OptimizeConfig: search_floor must be >= 0");
    quadrature.validate();
}

namespace
{

double antenna_spacing(const UserDensity &f, std::size_t n)
{
    return f.length_scale() / std::pow(static_cast<double>(n), 1.0 / static_cast<double>(f.dim()));
}

using EvalFn = std::function<GradientEstimate(const Deployment &, bool)>;

struct AscentSettings
{
    double spacing;
    double initial_step;
    double shrink;
    double sufficient_increase;
    double tol;
    std::size_t max_iters;
    const Cell *cell; // null when unconstrained
};

struct AscentOutcome
{
    Deployment x;
    std::vector<double> objective;
    std::vector<double> step;
    std::vector<double> grad_norm;
    std::size_t iterations = 0;
    bool converged = false;
};

// Zeroes gradient components that push a coordinate out of the box.
void project_gradient(const Deployment &x, std::vector<double> &g, const Cell *cell)
{
    if (!cell || !cell->bounded())
        return;
    const std::size_t d = x.dim();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t a = 0; a < d; ++a)
        {
            const double lo = cell->origin()[a], hi = lo + cell->side();
            const double v = x.point(i)[a];
            double &gi = g[i * d + a];
            if ((v <= lo && gi < 0.0) || (v >= hi && gi > 0.0))
                gi = 0.0;
        }
}

double max_abs(const std::vector<double> &v)
{
    double m = 0.0;
    for (double t : v)
        m = std::max(m, std::abs(t));
    return m;
}

double l2(const std::vector<double> &v)
{
    double s = 0.0;
    for (double t : v)
        s += t * t;
    return std::sqrt(s);
}

AscentOutcome ascend(Deployment x, const EvalFn &eval, const AscentSettings &cfg)
{
    AscentOutcome out{x, {}, {}, {}, 0, false};
    if (cfg.cell)
        for (std::size_t i = 0; i < x.size(); ++i)
            cfg.cell->project(x.point(i));

    GradientEstimate ev = eval(x, true);
    double value = ev.objective.value;
    std::vector<double> g = ev.value;
    project_gradient(x, g, cfg.cell);
    const double g0 = l2(g);
    double t = -1.0;
    const double min_move = 1e-12 * cfg.spacing;

    for (std::size_t it = 0;; ++it)
    {
        const double gn = l2(g);
        out.objective.push_back(value);
        out.grad_norm.push_back(gn);
        if (gn == 0.0 || gn <= cfg.tol * g0)
        {
            out.converged = true;
            break;
        }
        if (it >= cfg.max_iters)
            break;
        if (t < 0.0)
            t = cfg.initial_step * cfg.spacing / max_abs(g);

        bool accepted = false;
        Deployment cand = x;
        double cand_value = value;
        for (;;)
        {
            cand = x;
            auto &cf = cand.flat();
            for (std::size_t k = 0; k < cf.size(); ++k)
                cf[k] += t * g[k];
            if (cfg.cell)
                for (std::size_t i = 0; i < cand.size(); ++i)
                    cfg.cell->project(cand.point(i));

            double predicted = 0.0, move = 0.0;
            for (std::size_t k = 0; k < cf.size(); ++k)
            {
                const double dx = cf[k] - x.flat()[k];
                predicted += g[k] * dx;
                move = std::max(move, std::abs(dx));
            }
            if (move < min_move)
                break;
            cand_value = eval(cand, false).objective.value;
            if (std::isfinite(cand_value) && cand_value > value &&
                cand_value >= value + cfg.sufficient_increase * predicted)
            {
                accepted = true;
                break;
            }
            t *= cfg.shrink;
        }
        if (!accepted)
        {
            // no representable ascent step left
            out.converged = true;
            break;
        }

        x = std::move(cand);
        out.step.push_back(t);
        out.iterations = it + 1;
        ev = eval(x, true);
        value = ev.objective.value;
        g = ev.value;
        project_gradient(x, g, cfg.cell);
        t *= 2.0;
    }
    out.x = std::move(x);
    return out;
}

GradientEstimate value_only(Estimate e, const Deployment &x)
{
    GradientEstimate g;
    g.n = x.size();
    g.d = x.dim();
    g.objective = e;
    return g;
}

Deployment random_start(const UserDensity &f, std::size_t n, std::uint64_t seed, const Cell &cell, bool constrain)
{
    std::vector<Point> pts = sample(f, n, seed);
    const double jitter = antenna_spacing(f, n) / 10.0;
    CounterRng rng(seed, std::numeric_limits<std::uint64_t>::max());
    std::vector<double> flat;
    flat.reserve(n * f.dim());
    for (auto &p : pts)
        for (double c : p.coords)
            flat.push_back(c + jitter * rng.normal());
    Deployment x(f.dim(), std::move(flat));
    if (constrain)
        for (std::size_t i = 0; i < n; ++i)
            cell.project(x.point(i));
    return x;
}

} // namespace

OptimizeResult optimize_deployment(const UserDensity &f, const RateParams &p, const OptimizeConfig &cfg)
{
    cfg.validate();
    p.validate();
    if (p.d != f.dim())
        throw std::invalid_argument("optimize_deployment: RateParams dimension does not match the density");

    const std::size_t n = p.n, d = p.d;
    const Cell &cell = f.support();
    const bool constrain = cfg.constrain_to_cell.value_or(cell.bounded()) && cell.bounded();
    const double spacing = antenna_spacing(f, n);
    const SampleSet nodes = draw_samples(f, cfg.quadrature);
    const double report_floor = cfg.quadrature.distance_floor;
    const double search_floor = std::max(report_floor, cfg.search_floor * spacing);

    auto evaluate = [&](const Deployment &x, bool with_grad, double floor) -> GradientEstimate
    {
        if (cfg.objective == ObjectiveKind::logquant)
            return with_grad ? quantizer_objective_grad(x, nodes, floor)
                             : value_only(quantizer_objective(x, nodes, floor), x);
        const RateParams px{p.P, p.r, n, d};
        if (!with_grad)
            return value_only(average_rate(x, nodes, px, floor), x);
        if (p.r == 0.0)
        {
            // constant objective log(1 + P)
            GradientEstimate g = value_only(average_rate(x, nodes, px, floor), x);
            g.value.assign(n * d, 0.0);
            g.std_error.assign(n * d, 0.0);
            return g;
        }
        return average_rate_grad(x, nodes, px, floor);
    };
    const EvalFn search = [&](const Deployment &x, bool with_grad) { return evaluate(x, with_grad, search_floor); };

    std::vector<std::string> plan;
    if (cell.bounded())
        plan.emplace_back("square");
    if (cell.bounded() && d == 2)
        plan.emplace_back("hex");
    plan.emplace_back("matched");

    const AscentSettings settings{spacing,
                                  cfg.initial_step,
                                  cfg.shrink,
                                  cfg.sufficient_increase,
                                  cfg.tol,
                                  cfg.max_iters,
                                  constrain ? &cell : nullptr};

    struct Outcome
    {
        RestartTrace trace;
        std::optional<Deployment> x;
        std::string warning;
    };
    std::vector<Outcome> outcomes(cfg.restarts);

    parallel_for_chunks(cfg.restarts,
                        [&](std::size_t r)
                        {
                            const std::uint64_t rseed = derive_seed(cfg.seed, r);
                            Outcome &o = outcomes[r];
                            RestartTrace &rt = o.trace;
                            rt.init = r < plan.size() ? plan[r] : "random";
                            Deployment x0 = [&]
                            {
                                if (rt.init == "square")
                                    return square_lattice_deployment(n, cell);
                                if (rt.init == "hex")
                                    return hex_lattice_deployment(n, cell);
                                if (rt.init == "matched")
                                    return matched_density_deployment(f, n, rseed,
                                                                      cfg.quadrature.with_seed(derive_seed(rseed, 1)));
                                return random_start(f, n, rseed, cell, constrain);
                            }();
                            const std::string tag = "restart " + std::to_string(r) + " (" + rt.init + "): ";

                            if (!std::isfinite(evaluate(x0, false, search_floor).objective.value))
                            {
                                rt.discarded = true;
                                o.warning = tag + "non-finite objective at initialization, discarded";
                                return;
                            }
                            AscentOutcome a = ascend(std::move(x0), search, settings);
                            rt.objective = std::move(a.objective);
                            rt.step = std::move(a.step);
                            rt.grad_norm = std::move(a.grad_norm);
                            rt.iterations = a.iterations;
                            rt.converged = a.converged;
                            rt.final_value = evaluate(a.x, false, report_floor).objective;
                            if (!std::isfinite(rt.final_value.value))
                            {
                                rt.discarded = true;
                                o.warning = tag + "non-finite final objective, discarded";
                                return;
                            }
                            o.x = std::move(a.x);
                        });

    // merge in restart order; ties keep the lower index
    OptTrace trace;
    std::optional<Deployment> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < outcomes.size(); ++r)
    {
        Outcome &o = outcomes[r];
        if (!o.warning.empty())
            trace.warnings.push_back(o.warning);
        if (o.x && o.trace.final_value.value > best_value)
        {
            best_value = o.trace.final_value.value;
            best = std::move(o.x);
            trace.winner = r;
        }
        trace.restarts.push_back(std::move(o.trace));
    }

    if (!best)
        throw std::runtime_error("optimize_deployment: every restart was discarded");
    return {std::move(*best), std::move(trace)};
}

// ---------- log-Lloyd ----------

LloydResult log_lloyd(const Deployment &x0, const UserDensity &f, std::size_t iters, const QuadratureSpec &q,
                      const LloydOptions &opts)
{
    if (iters < 1)
        throw std::invalid_argument("log_lloyd: iters must be at least 1");
    if (x0.dim() != f.dim())
        throw std::invalid_argument("log_lloyd: deployment and density differ in dimension");

    const std::size_t n = x0.size(), d = x0.dim();
    const Cell &cell = f.support();
    const bool constrain = opts.constrain_to_cell.value_or(cell.bounded()) && cell.bounded();
    const double spacing = antenna_spacing(f, n);
    const double eps = std::max(q.distance_floor, opts.search_floor * spacing);
    const SampleSet nodes = draw_samples(f, q);
    const auto total = static_cast<double>(nodes.size());

    LloydResult res{x0, {}, {}, {}};
    Deployment &x = res.deployment;
    if (constrain)
        for (std::size_t i = 0; i < n; ++i)
            cell.project(x.point(i));
    res.objective.push_back(quantizer_objective(x, nodes, eps).value);

    std::vector<std::vector<std::size_t>> members(n);
    std::vector<char> flagged(n, 0);
    for (std::size_t it = 0; it < iters; ++it)
    {
        for (auto &m : members)
            m.clear();
        for (std::size_t k = 0; k < nodes.size(); ++k)
            members[nearest_antenna(nodes.point(k), x).index].push_back(k);

        double movement = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto &mine = members[i];
            if (mine.empty())
            {
                flagged[i] = 1;
                continue;
            }
            // own-cell integral of -log |u - c| and its gradient
            const EvalFn cell_objective = [&](const Deployment &c, bool with_grad)
            {
                CompensatedSum value;
                std::vector<CompensatedSum> grad(with_grad ? d : 0);
                auto xc = c.point(0);
                for (std::size_t k : mine)
                {
                    auto u = nodes.point(k);
                    const double w = nodes.weight(k);
                    const double sq = squared_distance(u, xc);
                    double coeff;
                    if (sq < eps * eps)
                    {
                        const auto fd = floor_distance(std::sqrt(sq), eps);
                        value.add(-w * std::log(fd.value));
                        coeff = -1.0 / (fd.value * eps);
                    }
                    else
                    {
                        value.add(-0.5 * w * std::log(sq));
                        coeff = -1.0 / sq;
                    }
                    for (std::size_t a = 0; a < grad.size(); ++a)
                        grad[a].add(w * coeff * (xc[a] - u[a]));
                }
                GradientEstimate g;
                g.n = 1;
                g.d = d;
                g.objective = {value.value() / total, 0.0};
                for (auto &ga : grad)
                    g.value.push_back(ga.value() / total);
                return g;
            };
            const auto before = x.point(i);
            Deployment single(d, std::vector<double>(before.begin(), before.end()));
            const AscentSettings settings{spacing, 0.1, 0.5, 1e-4, 0.0, opts.inner_iters, constrain ? &cell : nullptr};
            AscentOutcome a = ascend(single, cell_objective, settings);
            auto after = a.x.point(0);
            double shift = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                shift = std::max(shift, std::abs(after[k] - before[k]));
            movement = std::max(movement, shift);
            std::copy(after.begin(), after.end(), x.point(i).begin());
        }
        res.movement.push_back(movement);
        res.objective.push_back(quantizer_objective(x, nodes, eps).value);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (flagged[i])
            res.empty_cells.push_back(i);
    return res;
}

Deployment matched_density_deployment(const UserDensity &f, std::size_t n, std::uint64_t seed, const QuadratureSpec &q)
{
    if (n < 1)
        throw std::invalid_argument("matched_density_deployment: n must be at least 1");
    if (f.dim() == 1)
    {
        std::vector<double> flat(n);
        for (std::size_t i = 0; i < n; ++i)
            flat[i] = f.inverse_cdf((2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n)));
        return {1, std::move(flat)};
    }
    Deployment start = Deployment::from_points(sample(f, n, seed));
    return log_lloyd(start, f, 10, q).deployment;
}

Deployment matched_density_deployment(const UserDensity &f, std::size_t n, std::uint64_t seed)
{
    QuadratureSpec q;
    q.seed = derive_seed(seed, 1);
    return matched_density_deployment(f, n, seed, q);
}

} // namespace dmimo
