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

#ifndef DMIMO_TESTS_SUPPORT_HPP
#define DMIMO_TESTS_SUPPORT_HPP

#include "dmimo/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dmimo::test
{

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline Deployment line(std::vector<double> xs) { return {1, std::move(xs)}; }

inline Deployment plane(const std::vector<std::pair<double, double>> &pts)
{
    std::vector<double> flat;
    for (auto [x, y] : pts)
    {
        flat.push_back(x);
        flat.push_back(y);
    }
    return {2, std::move(flat)};
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace dmimo::test

#endif
