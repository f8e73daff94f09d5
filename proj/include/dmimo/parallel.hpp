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

#ifndef DMIMO_PARALLEL_HPP
#define DMIMO_PARALLEL_HPP

#include <cmath>
#include <cstddef>
#include <functional>

namespace dmimo
{

// Neumaier compensated summation.
class CompensatedSum
{
  public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Number of worker threads used by parallel_for_chunks (DMIMO_THREADS overrides).
std::size_t worker_count();
// Forces the worker count; 0 restores the default.
void set_worker_count(std::size_t count);

// Calls body(chunk) for chunk in [0, chunks) on up to worker_count() threads.
// Callers write per-chunk partial results and reduce them in chunk order, so
// results never depend on the thread count.
// Nested calls made from inside a worker run serially on that worker.
void parallel_for_chunks(std::size_t chunks, const std::function<void(std::size_t)> &body);

} // namespace dmimo

#endif
