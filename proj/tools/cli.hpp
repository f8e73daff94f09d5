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

#ifndef DMIMO_TOOLS_CLI_HPP
#define DMIMO_TOOLS_CLI_HPP

#include "dmimo/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmimo::cli
{

using Json = nlohmann::ordered_json;

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_compute = 3
};

// Invalid experiment configuration; field() is the dotted path of the offending entry.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct CommandResult
{
    Json data;                         // machine-readable result
    std::optional<CsvTable> table;     // preferred CSV form, if any
    std::vector<std::string> warnings;
};

// Names accepted by resolve_config / execute.
const std::vector<std::string> &command_names();
std::string command_description(const std::string &name);

// Fills defaults and validates every field; the result round-trips through
// execute unchanged. Throws ConfigError.
Json resolve_config(const std::string &command, const Json &raw);

// Runs a resolved configuration. Library errors propagate as exceptions.
CommandResult execute(const std::string &command, const Json &resolved);

// Envelope written for --format json.
Json json_document(const std::string &command, const Json &resolved, const CommandResult &result);
// CSV text with the resolved configuration embedded as a leading comment.
std::string csv_document(const Json &resolved, const CommandResult &result);

// Loads a JSON config file, or the configuration embedded in an earlier CSV output.
Json load_config_file(const std::string &path);

struct SweepRow
{
    std::size_t n = 0;
    double rate = 0.0;
    double rate_stderr = 0.0;
    double predicted = 0.0; // NaN when the prediction does not apply
    double lower = 0.0;     // NaN for unbounded cells
    double upper = 0.0;
    std::uint64_t seed = 0;
};

std::vector<SweepRow> sweep_rows(const Json &resolved);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dmimo::cli

#endif
