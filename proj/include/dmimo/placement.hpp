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

#ifndef DMIMO_PLACEMENT_HPP
#define DMIMO_PLACEMENT_HPP

#include "dmimo/density.hpp"
#include "dmimo/geometry.hpp"
#include "dmimo/quadrature.hpp"
#include "dmimo/rate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dmimo
{

enum class ObjectiveKind
{
    rate,    // average rate R(X)
    logquant // log-quantizer objective R~(X)
};

std::string to_string(ObjectiveKind k);
ObjectiveKind objective_from_string(const std::string &s);

struct OptimizeConfig
{
    ObjectiveKind objective = ObjectiveKind::rate;
    std::size_t restarts = 8;
    std::size_t max_iters = 500;
    // First trial move, as a fraction of the antenna spacing L / n^(1/d).
    double initial_step = 0.1;
    double shrink = 0.5;
    double sufficient_increase = 1e-4;
    // Stop once the projected gradient norm falls below tol times its initial value.
    double tol = 1e-5;
    std::uint64_t seed = 1;
    // Project onto the cell after every step; defaults to true for box cells.
    std::optional<bool> constrain_to_cell;
    // Nodes and distance floor used to evaluate (and rank) final deployments.
    QuadratureSpec quadrature;
    // Distance floor used while ascending, relative to the antenna spacing.
    // The floor smooths the integrable log singularity at each antenna, which
    // otherwise dominates gradient estimates in d = 1.
    double search_floor = 1e-2;

    void validate() const;
};

struct RestartTrace
{
    std::string init;               // square, hex, matched or random
    std::vector<double> objective;  // search objective at each iterate
    std::vector<double> step;       // accepted step multipliers
    std::vector<double> grad_norm;  // projected gradient norm at each iterate
    Estimate final_value;           // evaluated with OptimizeConfig::quadrature
    std::size_t iterations = 0;
    bool converged = false;
    bool discarded = false;
};

struct OptTrace
{
    std::vector<RestartTrace> restarts;
    std::size_t winner = 0;
    std::vector<std::string> warnings;
    const RestartTrace &best() const { return restarts.at(winner); }
};

struct OptimizeResult
{
    Deployment deployment;
    OptTrace trace;
};

// Multistart projected gradient ascent with backtracking on R or R~.
// Initializations, in order: square lattice (box cells), hexagonal lattice
// (d = 2 box), matched-density deployment, then i.i.d. draws from f jittered by
// N(0, (L / (10 n^(1/d)))^2). The best final value wins; ties go to the lower
// restart index.
OptimizeResult optimize_deployment(const UserDensity &f, const RateParams &p, const OptimizeConfig &cfg);

struct LloydOptions
{
    std::size_t inner_iters = 25;
    double search_floor = 1e-2; // relative to the antenna spacing, as above
    std::optional<bool> constrain_to_cell;
};

struct LloydResult
{
    Deployment deployment;
    // R~ on the fixed node set before the first and after every outer iteration.
    std::vector<double> objective;
    std::vector<double> movement; // largest antenna displacement per iteration
    std::vector<std::size_t> empty_cells; // antennas that ever had no nodes
};

// Alternates nearest-antenna assignment of the nodes with gradient ascent of
// each antenna's own cell integral of log(1/|u - x_i|).
LloydResult log_lloyd(const Deployment &x0, const UserDensity &f, std::size_t iters, const QuadratureSpec &q,
                      const LloydOptions &opts = {});

// Antenna density matched to f: inverse-CDF quantiles (2i-1)/(2n) for d = 1,
// otherwise n i.i.d. draws regularized by 10 log-Lloyd iterations.
Deployment matched_density_deployment(const UserDensity &f, std::size_t n, std::uint64_t seed);
Deployment matched_density_deployment(const UserDensity &f, std::size_t n, std::uint64_t seed,
                                      const QuadratureSpec &q);

} // namespace dmimo

#endif
