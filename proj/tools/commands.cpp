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

#include "cli.hpp"

#include "dmimo/asymptotics.hpp"
#include "dmimo/channel.hpp"
#include "dmimo/density.hpp"
#include "dmimo/geometry.hpp"
#include "dmimo/parallel.hpp"
#include "dmimo/placement.hpp"
#include "dmimo/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace dmimo::cli
{

namespace
{

const double nan = std::numeric_limits<double>::quiet_NaN();

// ---------- field access with path-qualified errors ----------

class Fields
{
  public:
    Fields(const Json *obj, std::string prefix) : prefix_(std::move(prefix))
    {
        if (obj && !obj->is_null())
        {
            if (!obj->is_object())
                throw ConfigError(prefix_.empty() ? "config" : prefix_, "must be a JSON object");
            obj_ = obj;
        }
    }

    std::string path(const std::string &key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    const Json *raw(const std::string &key)
    {
        known_.insert(key);
        if (!obj_)
            return nullptr;
        auto it = obj_->find(key);
        if (it == obj_->end() || it->is_null())
            return nullptr;
        return &*it;
    }

    bool has(const std::string &key) { return raw(key) != nullptr; }

    double number(const std::string &key, std::optional<double> def = {})
    {
        const Json *v = raw(key);
        if (!v)
            return required(key, def);
        if (!v->is_number())
            throw ConfigError(path(key), "must be a number");
        const double x = v->get<double>();
        if (!std::isfinite(x))
            throw ConfigError(path(key), "must be finite");
        return x;
    }

    std::uint64_t u64(const std::string &key, std::optional<std::uint64_t> def = {})
    {
        const Json *v = raw(key);
        if (!v)
            return required(key, def);
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
            throw ConfigError(path(key), "must be a non-negative integer");
        return v->get<std::uint64_t>();
    }

    std::size_t count(const std::string &key, std::optional<std::size_t> def = {}, std::size_t min = 1)
    {
        const std::size_t c = as_count(raw(key), path(key), def, min);
        return c;
    }

    std::string text(const std::string &key, std::optional<std::string> def = {})
    {
        const Json *v = raw(key);
        if (!v)
            return required(key, def);
        if (!v->is_string())
            throw ConfigError(path(key), "must be a string");
        return v->get<std::string>();
    }

    bool flag(const std::string &key, bool def)
    {
        const Json *v = raw(key);
        if (!v)
            return def;
        if (!v->is_boolean())
            throw ConfigError(path(key), "must be true or false");
        return v->get<bool>();
    }

    std::vector<double> numbers(const std::string &key, std::optional<std::vector<double>> def = {})
    {
        const Json *v = raw(key);
        if (!v)
            return required(key, def);
        return number_list(*v, path(key));
    }

    std::vector<std::size_t> counts(const std::string &key, std::optional<std::vector<std::size_t>> def = {})
    {
        const Json *v = raw(key);
        if (!v)
            return required(key, def);
        if (!v->is_array())
            throw ConfigError(path(key), "must be an array of positive integers");
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v->size(); ++i)
            out.push_back(as_count(&(*v)[i], path(key) + "[" + std::to_string(i) + "]", {}, 1));
        return out;
    }

    // Rejects keys that no accessor asked for.
    void finish() const
    {
        if (!obj_)
            return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it)
            if (!known_.count(it.key()))
                throw ConfigError(path(it.key()), "unknown field");
    }

    static std::vector<double> number_list(const Json &v, const std::string &where)
    {
        if (!v.is_array())
            throw ConfigError(where, "must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
                throw ConfigError(where + "[" + std::to_string(i) + "]", "must be a finite number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

  private:
    template <class T> T required(const std::string &key, const std::optional<T> &def) const
    {
        if (!def)
            throw ConfigError(path(key), "is required");
        return *def;
    }

    static std::size_t as_count(const Json *v, const std::string &where, std::optional<std::size_t> def,
                                std::size_t min)
    {
        if (!v)
        {
            if (!def)
                throw ConfigError(where, "is required");
            return *def;
        }
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                        v->get<std::int64_t>() < 0))
            throw ConfigError(where, "must be a non-negative integer");
        const auto c = v->get<std::uint64_t>();
        if (c < min)
            throw ConfigError(where, "must be at least " + std::to_string(min));
        return static_cast<std::size_t>(c);
    }

    const Json *obj_ = nullptr;
    std::string prefix_;
    std::set<std::string> known_;
};

template <class F> auto guarded(const std::string &field, F &&f)
{
    try
    {
        return f();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw ConfigError(field, e.what());
    }
}

Json point_list(const Deployment &x)
{
    Json pts = Json::array();
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        auto p = x.point(i);
        pts.push_back(std::vector<double>(p.begin(), p.end()));
    }
    return pts;
}

// ---------- shared sections ----------

std::string canonical_density_kind(const std::string &k, const std::string &where)
{
    if (k == "uniform" || k == "uniform_box" || k == "uniform-box")
        return "uniform";
    if (k == "beta25" || k == "beta25-1d")
        return "beta25";
    if (k == "gaussian2d" || k == "gaussian-2d")
        return "gaussian2d";
    if (k == "tabulated")
        return "tabulated";
    throw ConfigError(where, "unknown density kind '" + k + "' (uniform, beta25, gaussian2d, tabulated)");
}

UserDensity build_density(const Json &j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform")
        return UserDensity::uniform_box(
            Cell::box(j.at("d").get<std::size_t>(), j.at("M").get<double>(), j.at("origin").get<std::vector<double>>()));
    if (kind == "beta25")
        return UserDensity::beta25(j.at("origin").get<double>());
    if (kind == "gaussian2d")
        return UserDensity::gaussian2d(j.at("center").get<std::vector<double>>());
    return read_tabulated_csv(j.at("path").get<std::string>(), j.at("origin").get<std::vector<double>>());
}

Json resolve_density(Fields &parent)
{
    Fields f(parent.raw("density"), parent.path("density"));
    Json out;
    const std::string kind = canonical_density_kind(f.text("kind", "uniform"), f.path("kind"));
    out["kind"] = kind;
    if (kind == "uniform")
    {
        const std::size_t d = f.count("d", 1);
        const double M = f.number("M", 1.0);
        if (!(M > 0.0))
            throw ConfigError(f.path("M"), "must be positive");
        const auto origin = f.numbers("origin", std::vector<double>(d, 0.0));
        if (origin.size() != d)
            throw ConfigError(f.path("origin"), "must have d entries");
        out["d"] = d;
        out["M"] = M;
        out["origin"] = origin;
    }
    else if (kind == "beta25")
        out["origin"] = f.number("origin", 0.0);
    else if (kind == "gaussian2d")
    {
        const auto c = f.numbers("center", std::vector<double>{0.0, 0.0});
        if (c.size() != 2)
            throw ConfigError(f.path("center"), "must have 2 entries");
        out["center"] = c;
    }
    else
    {
        out["path"] = f.text("path");
        const auto origin = f.numbers("origin", std::vector<double>{});
        const UserDensity t = guarded(f.path("path"), [&] { return read_tabulated_csv(out["path"].get<std::string>()); });
        if (!origin.empty() && origin.size() != t.dim())
            throw ConfigError(f.path("origin"), "must have d entries");
        out["origin"] = origin.empty() ? std::vector<double>(t.dim(), 0.0) : origin;
    }
    f.finish();
    guarded(parent.path("density"), [&] { return build_density(out); });
    return out;
}

QuadratureSpec build_quadrature(const Json &j, std::uint64_t seed)
{
    QuadratureSpec q;
    q.method = quadrature_method_from_string(j.at("method").get<std::string>());
    q.samples = j.at("samples").get<std::size_t>();
    q.distance_floor = j.at("distance_floor").get<double>();
    q.seed = seed;
    return q;
}

Json resolve_quadrature(Fields &parent, std::size_t default_samples)
{
    Fields f(parent.raw("quadrature"), parent.path("quadrature"));
    Json out;
    const auto method = guarded(f.path("method"),
                                [&] { return quadrature_method_from_string(f.text("method", "stratified")); });
    out["method"] = to_string(method);
    out["samples"] = f.count("samples", default_samples, 2);
    out["distance_floor"] = f.number("distance_floor", 1e-9);
    f.finish();
    guarded(parent.path("quadrature"), [&] { build_quadrature(out, 1).validate(); return 0; });
    return out;
}

OptimizeConfig build_optimizer(const Json &j)
{
    OptimizeConfig c;
    c.objective = objective_from_string(j.at("objective").get<std::string>());
    c.restarts = j.at("restarts").get<std::size_t>();
    c.max_iters = j.at("max_iters").get<std::size_t>();
    c.initial_step = j.at("initial_step").get<double>();
    c.shrink = j.at("shrink").get<double>();
    c.sufficient_increase = j.at("sufficient_increase").get<double>();
    c.tol = j.at("tol").get<double>();
    c.search_floor = j.at("search_floor").get<double>();
    c.constrain_to_cell = j.at("constrain_to_cell").get<bool>();
    return c;
}

Json resolve_optimizer(Fields &parent, bool bounded, std::optional<std::string> forced_objective = {})
{
    Fields f(parent.raw("optimizer"), parent.path("optimizer"));
    const OptimizeConfig d;
    Json out;
    std::string objective = f.text("objective", to_string(d.objective));
    guarded(f.path("objective"), [&] { return objective_from_string(objective); });
    if (forced_objective && objective != *forced_objective)
        throw ConfigError(f.path("objective"), "this command requires objective '" + *forced_objective + "'");
    out["objective"] = objective;
    out["restarts"] = f.count("restarts", d.restarts);
    out["max_iters"] = f.count("max_iters", d.max_iters);
    out["initial_step"] = f.number("initial_step", d.initial_step);
    out["shrink"] = f.number("shrink", d.shrink);
    out["sufficient_increase"] = f.number("sufficient_increase", d.sufficient_increase);
    out["tol"] = f.number("tol", d.tol);
    out["search_floor"] = f.number("search_floor", d.search_floor);
    out["constrain_to_cell"] = f.flag("constrain_to_cell", bounded);
    f.finish();
    guarded(parent.path("optimizer"), [&] { build_optimizer(out).validate(); return 0; });
    return out;
}

void resolve_rate(Fields &f, Json &out, double default_r)
{
    const double P = f.number("P", 1.0);
    if (!(P > 0.0))
        throw ConfigError(f.path("P"), "must be positive");
    const double r = f.number("r", default_r);
    if (!(r >= 0.0))
        throw ConfigError(f.path("r"), "must be >= 0");
    out["P"] = P;
    out["r"] = r;
}

std::vector<std::size_t> resolve_grid(Fields &f, const std::string &key, std::vector<std::size_t> def)
{
    auto grid = f.counts(key, def);
    if (grid.empty())
        throw ConfigError(f.path(key), "must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw ConfigError(f.path(key), "must be strictly increasing");
    return grid;
}

Json begin(const std::string &command, Fields &f)
{
    Json out;
    if (const Json *c = f.raw("command"))
        if (!c->is_string() || c->get<std::string>() != command)
            throw ConfigError("command", "config was written for a different command");
    out["command"] = command;
    out["seed"] = f.u64("seed", 1);
    return out;
}

double resolve_zeta_star(Fields &f, std::size_t d, bool needed)
{
    if (f.has("zeta_star"))
        return f.number("zeta_star");
    if (auto z = zeta_star(d))
        return *z;
    if (needed)
        throw ConfigError(f.path("zeta_star"), "must be given for d >= 3");
    return nan;
}

Json maybe_number(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::size_t density_dim(const Json &density) { return build_density(density).dim(); }

// ---------- sweep and rho ----------

Json resolve_sweep_like(const std::string &command, const Json &raw, std::vector<std::size_t> default_grid)
{
    Fields f(&raw, "");
    Json out = begin(command, f);
    out["density"] = resolve_density(f);
    const UserDensity dens = build_density(out["density"]);
    resolve_rate(f, out, command == "rho" ? 4.0 : 2.0);
    out["n_grid"] = resolve_grid(f, "n_grid", std::move(default_grid));
    out["quadrature"] = resolve_quadrature(f, 200000);
    out["optimizer"] = resolve_optimizer(f, dens.support().bounded(), "rate");
    const bool needs_zeta = out["r"].get<double>() > static_cast<double>(dens.dim());
    out["zeta_star"] = maybe_number(resolve_zeta_star(f, dens.dim(), needs_zeta));
    if (command == "sweep")
        out["chart"] = f.flag("chart", true);
    else
    {
        const std::string fit = f.text("fit", "auto");
        if (fit != "auto" && fit != "all")
            throw ConfigError(f.path("fit"), "must be 'auto' or 'all'");
        out["fit"] = fit;
        if (out["n_grid"].size() < 3)
            throw ConfigError(f.path("n_grid"), "needs at least 3 entries for a slope fit");
    }
    f.finish();
    return out;
}

double entropy_of(const UserDensity &f, const QuadratureSpec &q)
{
    if (auto h = f.closed_form_entropy())
        return *h;
    return differential_entropy(f, EntropyMethod::monte_carlo, q).value;
}

CommandResult sweep_result(const Json &resolved, const std::vector<SweepRow> &rows)
{
    CommandResult res;
    CsvTable t;
    t.header = {"n", "R_sim", "R_sim_stderr", "R_pred", "LB", "UB", "seed"};
    Json arr = Json::array();
    for (const auto &r : rows)
    {
        t.rows.push_back({std::to_string(r.n), format_double(r.rate), format_double(r.rate_stderr),
                          format_double(r.predicted), format_double(r.lower), format_double(r.upper),
                          std::to_string(r.seed)});
        arr.push_back({{"n", r.n},
                       {"R_sim", r.rate},
                       {"R_sim_stderr", r.rate_stderr},
                       {"R_pred", maybe_number(r.predicted)},
                       {"LB", maybe_number(r.lower)},
                       {"UB", maybe_number(r.upper)},
                       {"seed", r.seed}});
    }
    (void)resolved;
    res.data["rows"] = std::move(arr);
    res.table = std::move(t);
    return res;
}

CommandResult run_sweep(const Json &c)
{
    return sweep_result(c, sweep_rows(c));
}

CommandResult run_rho(const Json &c)
{
    const auto rows = sweep_rows(c);
    std::size_t first = 0;
    if (c["fit"] == "auto" && rows.size() >= 6)
        first = rows.size() / 2;
    std::vector<double> n, rate;
    for (std::size_t i = first; i < rows.size(); ++i)
    {
        n.push_back(static_cast<double>(rows[i].n));
        rate.push_back(rows[i].rate);
    }
    const RhoFit fit = estimate_rho(n, rate);
    const UserDensity f = build_density(c["density"]);
    const RateParams p{c["P"].get<double>(), c["r"].get<double>(), 1, f.dim()};

    CommandResult res = sweep_result(c, rows);
    res.table->header.push_back("in_fit");
    for (std::size_t i = 0; i < rows.size(); ++i)
        res.table->rows[i].push_back(i >= first ? "1" : "0");
    res.data["slope"] = fit.slope;
    res.data["intercept"] = fit.intercept;
    res.data["rms"] = fit.rms;
    res.data["n_fit"] = fit.n;
    if (f.support().bounded())
    {
        const auto [lo, hi] = rho_bounds(p, f.support().measure() * f.sup_pdf());
        res.data["rho_low"] = lo;
        res.data["rho_high"] = hi;
    }
    return res;
}

// ---------- optimize ----------

Json resolve_optimize(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("optimize", f);
    out["density"] = resolve_density(f);
    const UserDensity dens = build_density(out["density"]);
    resolve_rate(f, out, 2.0);
    out["n"] = f.count("n", 8);
    out["quadrature"] = resolve_quadrature(f, 200000);
    out["optimizer"] = resolve_optimizer(f, dens.support().bounded());
    f.finish();
    return out;
}

CommandResult run_optimize(const Json &c)
{
    const UserDensity f = build_density(c["density"]);
    const std::uint64_t seed = c["seed"].get<std::uint64_t>();
    OptimizeConfig cfg = build_optimizer(c["optimizer"]);
    cfg.quadrature = build_quadrature(c["quadrature"], seed);
    cfg.seed = seed;
    const RateParams p{c["P"].get<double>(), c["r"].get<double>(), c["n"].get<std::size_t>(), f.dim()};
    const OptimizeResult r = optimize_deployment(f, p, cfg);

    CommandResult res;
    const RestartTrace &best = r.trace.best();
    res.data["objective"] = to_string(cfg.objective);
    res.data["value"] = best.final_value.value;
    res.data["std_error"] = best.final_value.std_error;
    res.data["winner"] = r.trace.winner;
    res.data["init"] = best.init;
    res.data["iterations"] = best.iterations;
    res.data["converged"] = best.converged;
    Json restarts = Json::array();
    for (const auto &t : r.trace.restarts)
        restarts.push_back({{"init", t.init},
                            {"value", t.discarded ? Json(nullptr) : Json(t.final_value.value)},
                            {"iterations", t.iterations},
                            {"converged", t.converged},
                            {"discarded", t.discarded}});
    res.data["restarts"] = std::move(restarts);
    res.data["deployment"] = point_list(r.deployment);
    res.warnings = r.trace.warnings;

    CsvTable t;
    for (std::size_t a = 0; a < f.dim(); ++a)
        t.header.push_back("x" + std::to_string(a + 1));
    for (std::size_t i = 0; i < r.deployment.size(); ++i)
    {
        auto pt = r.deployment.point(i);
        t.add_row(std::vector<double>(pt.begin(), pt.end()));
    }
    res.table = std::move(t);
    return res;
}

// ---------- predict / bounds ----------

Json resolve_predict(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("predict", f);
    out["density"] = resolve_density(f);
    const std::size_t d = density_dim(out["density"]);
    resolve_rate(f, out, 4.0);
    out["n"] = f.count("n", 16);
    if (f.has("entropy"))
        out["entropy"] = f.number("entropy");
    else
        out["entropy"] = nullptr;
    out["quadrature"] = resolve_quadrature(f, 1000000);
    out["zeta_star"] = maybe_number(resolve_zeta_star(f, d, true));
    f.finish();
    return out;
}

CommandResult run_predict(const Json &c)
{
    const UserDensity f = build_density(c["density"]);
    const RateParams p{c["P"].get<double>(), c["r"].get<double>(), c["n"].get<std::size_t>(), f.dim()};
    const QuadratureSpec q = build_quadrature(c["quadrature"], c["seed"].get<std::uint64_t>());
    const double H = c["entropy"].is_null() ? entropy_of(f, q) : c["entropy"].get<double>();
    const double z = c["zeta_star"].get<double>();
    CommandResult res;
    res.data["R_pred"] = predict_rate(p, H, z);
    res.data["entropy"] = H;
    res.data["zeta_star"] = z;
    if (f.kind() == DensityKind::uniform_box)
        res.data["Rtilde_uniform"] = predict_rtilde_uniform(p.n, f.support().side(), p.d, z);
    return res;
}

Json resolve_bounds(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("bounds", f);
    out["density"] = resolve_density(f);
    resolve_rate(f, out, 2.0);
    out["n"] = f.count("n", 16);
    f.finish();
    return out;
}

CommandResult run_bounds(const Json &c)
{
    const UserDensity f = build_density(c["density"]);
    const RateParams p{c["P"].get<double>(), c["r"].get<double>(), c["n"].get<std::size_t>(), f.dim()};
    const Cell &cell = f.support();
    const double ub = upper_bound_prop2(p, cell, f.sup_pdf());
    const double eta = cell.measure() * f.sup_pdf();
    const auto [lo, hi] = rho_bounds(p, eta);
    CommandResult res;
    res.data["LB"] = lower_bound_prop1(p, cell.side());
    res.data["UB"] = ub;
    res.data["eta"] = eta;
    res.data["sup_f"] = f.sup_pdf();
    res.data["rho_low"] = lo;
    res.data["rho_high"] = hi;
    return res;
}

// ---------- moments ----------

MomentRegion build_region(const Json &j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "interval")
        return MomentRegion::interval(j.at("side").get<double>());
    if (kind == "cube")
        return MomentRegion::cube(j.at("d").get<std::size_t>(), j.at("side").get<double>());
    if (kind == "ball")
        return MomentRegion::ball(j.at("d").get<std::size_t>(), j.at("radius").get<double>());
    if (kind == "hexagon")
        return MomentRegion::hexagon(j.at("side").get<double>());
    std::vector<std::array<double, 2>> v;
    for (const auto &p : j.at("vertices"))
        v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return MomentRegion::polygon(std::move(v));
}

Json resolve_moments(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("moments", f);
    Fields r(f.raw("region"), "region");
    Json region;
    const std::string kind = r.text("kind", "hexagon");
    region["kind"] = kind;
    if (kind == "interval" || kind == "hexagon")
        region["side"] = r.number("side", 1.0);
    else if (kind == "cube")
    {
        region["d"] = r.count("d", 2);
        region["side"] = r.number("side", 1.0);
    }
    else if (kind == "ball")
    {
        region["d"] = r.count("d", 2);
        region["radius"] = r.number("radius", 1.0);
    }
    else if (kind == "polygon")
    {
        const Json *v = r.raw("vertices");
        if (!v || !v->is_array())
            throw ConfigError(r.path("vertices"), "must be an array of [x, y] pairs");
        Json verts = Json::array();
        for (std::size_t i = 0; i < v->size(); ++i)
        {
            const auto xy = Fields::number_list((*v)[i], r.path("vertices") + "[" + std::to_string(i) + "]");
            if (xy.size() != 2)
                throw ConfigError(r.path("vertices") + "[" + std::to_string(i) + "]", "must be an [x, y] pair");
            verts.push_back(xy);
        }
        region["vertices"] = std::move(verts);
    }
    else
        throw ConfigError(r.path("kind"), "unknown region '" + kind + "' (interval, cube, ball, hexagon, polygon)");
    r.finish();
    guarded("region", [&] { return build_region(region); });
    out["region"] = std::move(region);
    out["quadrature"] = resolve_quadrature(f, 1000000);
    f.finish();
    return out;
}

CommandResult run_moments(const Json &c)
{
    const MomentRegion region = build_region(c["region"]);
    const Estimate z = zeta_region(region, build_quadrature(c["quadrature"], c["seed"].get<std::uint64_t>()));
    double closed = nan;
    switch (region.kind())
    {
    case MomentRegion::Kind::interval:
        closed = zeta_cube(1);
        break;
    case MomentRegion::Kind::cube:
        if (region.dim() <= 2)
            closed = zeta_cube(region.dim());
        break;
    case MomentRegion::Kind::ball:
        closed = zeta_ball(region.dim());
        break;
    case MomentRegion::Kind::hexagon:
        closed = zeta_hexagon();
        break;
    case MomentRegion::Kind::polygon:
        break;
    }
    CommandResult res;
    res.data["zeta"] = z.value;
    res.data["std_error"] = z.std_error;
    res.data["closed_form"] = maybe_number(closed);
    res.data["measure"] = region.measure();
    return res;
}

// ---------- lemma ----------

LatticeSpec build_lattice(const Json &c)
{
    const std::string kind = c["lattice"].get<std::string>();
    const double beta = c["beta"].get<double>();
    if (kind == "hexagonal")
        return LatticeSpec::hexagonal(beta);
    return LatticeSpec::integer(c["d"].get<std::size_t>(), beta);
}

Json resolve_lemma(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("lemma", f);
    const auto u = f.numbers("u", std::vector<double>{0.25});
    const std::size_t d = f.count("d", u.size());
    if (u.size() != d)
        throw ConfigError(f.path("u"), "must have d entries");
    out["d"] = d;
    out["u"] = u;
    out["r"] = f.number("r", 16.0);
    const std::string lattice = f.text("lattice", "integer");
    if (lattice != "integer" && lattice != "hexagonal")
        throw ConfigError(f.path("lattice"), "must be 'integer' or 'hexagonal'");
    out["lattice"] = lattice;
    out["beta"] = f.number("beta", 1.0);
    out["radius"] = f.count("radius", d == 1 ? 100000 : 100, 2);
    f.finish();
    guarded("lattice", [&] { return build_lattice(out); });
    if (!(out["r"].get<double>() > static_cast<double>(d)))
        throw ConfigError("r", "the lattice sum converges only for r > d");
    return out;
}

CommandResult run_lemma(const Json &c)
{
    const auto u = c["u"].get<std::vector<double>>();
    CommandResult res;
    res.data["ratio"] = lattice_sum_ratio(u, build_lattice(c), c["r"].get<double>(), c["radius"].get<long>());
    return res;
}

// ---------- zfsim ----------

Json resolve_zfsim(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("zfsim", f);
    resolve_rate(f, out, 4.0);

    Deployment x(1, {0.0});
    const Json *dep = f.raw("deployment");
    if (!dep)
        x = square_lattice_deployment(4, Cell::box(1, 1.0));
    else if (dep->is_array())
    {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < dep->size(); ++i)
            pts.emplace_back(Fields::number_list((*dep)[i], "deployment[" + std::to_string(i) + "]"));
        x = guarded("deployment", [&] { return Deployment::from_points(pts); });
    }
    else
    {
        Fields g(dep, "deployment");
        if (g.has("path"))
            x = guarded("deployment.path", [&] { return read_deployment_csv(g.text("path")); });
        else
        {
            const std::size_t n = g.count("n", 4), d = g.count("d", 1);
            const double M = g.number("M", 1.0);
            x = guarded("deployment", [&] { return square_lattice_deployment(n, Cell::box(d, M)); });
        }
        g.finish();
    }
    out["deployment"] = point_list(x);

    const Json *users = f.raw("users");
    Json ulist = Json::array();
    if (!users)
        for (double u : {0.1, 0.35, 0.6, 0.85})
            ulist.push_back(std::vector<double>{u});
    else
    {
        if (!users->is_array() || users->empty())
            throw ConfigError("users", "must be a non-empty array of points");
        for (std::size_t j = 0; j < users->size(); ++j)
        {
            const auto p = Fields::number_list((*users)[j], "users[" + std::to_string(j) + "]");
            if (p.size() != x.dim())
                throw ConfigError("users[" + std::to_string(j) + "]", "dimension does not match the deployment");
            for (std::size_t i = 0; i < x.size(); ++i)
                if (squared_distance(p, x.point(i)) == 0.0)
                    throw ConfigError("users[" + std::to_string(j) + "]", "coincides with an antenna site");
            ulist.push_back(p);
        }
    }
    out["users"] = ulist;

    std::vector<std::size_t> grid;
    if (f.has("N"))
        grid = {f.count("N")};
    else
        grid = resolve_grid(f, "N_grid", {64, 256, 1024});
    f.raw("N_grid");
    out["N_grid"] = grid;
    out["trials"] = f.count("trials", 200);
    f.finish();
    for (std::size_t N : grid)
    {
        const ChannelParams cp{N, ulist.size(), out["trials"].get<std::size_t>(), 1};
        guarded("N_grid", [&] { cp.validate(x.size()); return 0; });
    }
    return out;
}

CommandResult run_zfsim(const Json &c)
{
    std::vector<Point> pts, users;
    for (const auto &p : c["deployment"])
        pts.emplace_back(p.get<std::vector<double>>());
    for (const auto &p : c["users"])
        users.emplace_back(p.get<std::vector<double>>());
    const Deployment x = Deployment::from_points(pts);
    const RateParams p = RateParams::for_deployment(x, c["P"].get<double>(), c["r"].get<double>());
    const std::uint64_t seed = c["seed"].get<std::uint64_t>();

    CommandResult res;
    CsvTable t;
    t.header = {"N", "user", "mean", "std_error", "limit", "abs_error", "discarded"};
    Json rows = Json::array();
    for (std::size_t N : c["N_grid"].get<std::vector<std::size_t>>())
    {
        const ChannelParams cp{N, users.size(), c["trials"].get<std::size_t>(), derive_seed(seed, N)};
        const ZfResult z = zf_rate_monte_carlo(x, users, p, cp);
        for (std::size_t j = 0; j < users.size(); ++j)
        {
            const double err = std::abs(z.mean[j] - z.limit[j]);
            t.add_row({static_cast<double>(N), static_cast<double>(j), z.mean[j], z.std_error[j], z.limit[j], err,
                       static_cast<double>(z.discarded)});
            rows.push_back({{"N", N},
                            {"user", j},
                            {"mean", z.mean[j]},
                            {"std_error", z.std_error[j]},
                            {"limit", z.limit[j]},
                            {"abs_error", err},
                            {"discarded", z.discarded}});
        }
    }
    res.data["rows"] = std::move(rows);
    res.table = std::move(t);
    return res;
}

// ---------- entropy ----------

Json resolve_entropy(const Json &raw)
{
    Fields f(&raw, "");
    Json out = begin("entropy", f);
    out["density"] = resolve_density(f);
    const UserDensity dens = build_density(out["density"]);
    const std::string def = dens.closed_form_entropy() ? "closed-form" : "monte-carlo";
    const std::string method = f.text("method", def);
    if (method != "closed-form" && method != "monte-carlo")
        throw ConfigError(f.path("method"), "must be 'closed-form' or 'monte-carlo'");
    if (method == "closed-form" && !dens.closed_form_entropy())
        throw ConfigError(f.path("method"), "no closed form is available for this density");
    out["method"] = method;
    out["quadrature"] = resolve_quadrature(f, 1000000);
    f.finish();
    return out;
}

CommandResult run_entropy(const Json &c)
{
    const UserDensity f = build_density(c["density"]);
    const auto method = c["method"] == "closed-form" ? EntropyMethod::closed_form : EntropyMethod::monte_carlo;
    const Estimate h = differential_entropy(f, method, build_quadrature(c["quadrature"], c["seed"].get<std::uint64_t>()));
    CommandResult res;
    res.data["entropy"] = h.value;
    res.data["std_error"] = h.std_error;
    res.data["method"] = c["method"];
    return res;
}

struct Command
{
    const char *description;
    Json (*resolve)(const Json &);
    CommandResult (*run)(const Json &);
};

const std::map<std::string, Command> &commands()
{
    static const std::map<std::string, Command> table = {
        {"sweep",
         {"optimize the average rate over an n grid and compare with the prediction and bounds",
          [](const Json &raw) { return resolve_sweep_like("sweep", raw, {2, 4, 8, 16, 32}); }, run_sweep}},
        {"rho",
         {"fit the macromultiplexing slope from optimized rates",
          [](const Json &raw) { return resolve_sweep_like("rho", raw, {32, 64, 128, 256}); }, run_rho}},
        {"optimize", {"optimize one deployment", resolve_optimize, run_optimize}},
        {"predict", {"high-resolution rate prediction", resolve_predict, run_predict}},
        {"bounds", {"lower and upper rate bounds and slope bounds", resolve_bounds, run_bounds}},
        {"moments", {"normalized logarithmic moment of a region", resolve_moments, run_moments}},
        {"lemma", {"lattice sum ratio diagnostics", resolve_lemma, run_lemma}},
        {"zfsim", {"finite-N zero-forcing Monte Carlo", resolve_zfsim, run_zfsim}},
        {"entropy", {"differential entropy of a user density", resolve_entropy, run_entropy}},
    };
    return table;
}

const Command &command(const std::string &name)
{
    auto it = commands().find(name);
    if (it == commands().end())
        throw ConfigError("command", "unknown command '" + name + "'");
    return it->second;
}

} // namespace

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names = []
    {
        std::vector<std::string> v;
        for (const auto &[k, _] : commands())
            v.push_back(k);
        return v;
    }();
    return names;
}

Json resolve_config(const std::string &name, const Json &raw)
{
    return command(name).resolve(raw);
}

CommandResult execute(const std::string &name, const Json &resolved)
{
    return command(name).run(resolved);
}

std::vector<SweepRow> sweep_rows(const Json &c)
{
    const UserDensity f = build_density(c["density"]);
    const std::uint64_t seed = c["seed"].get<std::uint64_t>();
    const auto grid = c["n_grid"].get<std::vector<std::size_t>>();
    const double P = c["P"].get<double>(), r = c["r"].get<double>();
    const std::size_t d = f.dim();
    const QuadratureSpec base = build_quadrature(c["quadrature"], seed);
    const OptimizeConfig opt = build_optimizer(c["optimizer"]);
    const double zeta = c["zeta_star"].is_null() ? nan : c["zeta_star"].get<double>();
    const double H = r > static_cast<double>(d) ? entropy_of(f, base.with_seed(derive_seed(seed, 0))) : nan;
    const Cell &cell = f.support();

    std::vector<SweepRow> rows(grid.size());
    parallel_for_chunks(grid.size(),
                        [&](std::size_t k)
                        {
                            const std::size_t n = grid[k];
                            const RateParams p{P, r, n, d};
                            SweepRow &row = rows[k];
                            row.n = n;
                            row.seed = derive_seed(seed, n);
                            OptimizeConfig cfg = opt;
                            cfg.seed = row.seed;
                            cfg.quadrature = base.with_seed(row.seed);
                            const Estimate v = optimize_deployment(f, p, cfg).trace.best().final_value;
                            row.rate = v.value;
                            row.rate_stderr = v.std_error;
                            row.predicted = r > static_cast<double>(d) ? predict_rate(p, H, zeta) : nan;
                            row.lower = cell.bounded() ? lower_bound_prop1(p, cell.side()) : nan;
                            row.upper = cell.bounded() ? upper_bound_prop2(p, cell, f.sup_pdf()) : nan;
                        });
    return rows;
}

Json json_document(const std::string &name, const Json &resolved, const CommandResult &result)
{
    Json doc;
    doc["command"] = name;
    doc["seed"] = resolved["seed"];
    doc["config"] = resolved;
    doc["result"] = result.data;
    if (!result.warnings.empty())
        doc["warnings"] = result.warnings;
    return doc;
}

std::string csv_document(const Json &resolved, const CommandResult &result)
{
    CsvTable t;
    if (result.table)
        t = *result.table;
    else
    {
        t.header.push_back("seed");
        std::vector<std::string> row{std::to_string(resolved["seed"].get<std::uint64_t>())};
        for (auto it = result.data.begin(); it != result.data.end(); ++it)
        {
            std::string cell;
            if (it->is_number())
                cell = format_double(it->get<double>());
            else if (it->is_null())
                cell = "nan";
            else if (it->is_string())
                cell = it->get<std::string>();
            else if (it->is_boolean())
                cell = it->get<bool>() ? "1" : "0";
            else
                continue;
            t.header.push_back(it.key());
            row.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }
    return format_csv(t, {"config: " + resolved.dump()});
}

Json load_config_file(const std::string &path)
{
    const std::string text = guarded("config", [&] { return read_text_file(path); });
    const std::string marker = "# config: ";
    const auto start = text.find_first_not_of(" \t\r\n");
    try
    {
        if (start != std::string::npos && text.compare(start, marker.size(), marker) == 0)
        {
            const auto end = text.find('\n', start);
            return Json::parse(text.substr(start + marker.size(), end == std::string::npos ? end : end - start - marker.size()));
        }
        return Json::parse(text);
    }
    catch (const Json::exception &e)
    {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
}

std::string command_description(const std::string &name)
{
    return command(name).description;
}

} // namespace dmimo::cli
