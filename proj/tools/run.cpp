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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace dmimo::cli
{

namespace
{

bool csv_by_default(const std::string &command)
{
    return command == "sweep" || command == "rho" || command == "zfsim";
}

void write_outputs(const std::filesystem::path &dir, const std::string &command, const std::string &ext,
                   const std::string &document, const Json &resolved, const CommandResult &result, std::ostream &err)
{
    write_text_file(dir / (command + "." + ext), document);
    if (command == "optimize")
    {
        std::vector<double> flat;
        std::size_t d = 0;
        for (const auto &p : result.data["deployment"])
        {
            d = p.size();
            for (const auto &v : p)
                flat.push_back(v.get<double>());
        }
        write_text_file(dir / "deployment.csv", format_deployment_csv(Deployment(d, std::move(flat))));
    }
    if (command == "sweep" && resolved["chart"].get<bool>())
    {
        // the CSV is already on disk; a chart failure only warns
        try
        {
            Series sim{"R_sim", {}, {}}, pred{"R_pred", {}, {}};
            for (const auto &row : result.data["rows"])
            {
                const double n = row["n"].get<double>();
                sim.x.push_back(n);
                sim.y.push_back(row["R_sim"].get<double>());
                if (!row["R_pred"].is_null())
                {
                    pred.x.push_back(n);
                    pred.y.push_back(row["R_pred"].get<double>());
                }
            }
            std::vector<Series> series{sim};
            if (!pred.x.empty())
                series.push_back(pred);
            ChartOptions opts;
            opts.title = "average rate, r = " + format_double(resolved["r"].get<double>());
            opts.x_label = "n";
            opts.y_label = "nats/s/Hz";
            opts.log_x = true;
            write_text_file(dir / "sweep.svg", line_chart_svg(series, opts));
        }
        catch (const std::exception &e)
        {
            err << "warning: chart not written: " << e.what() << '\n';
        }
    }
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"dmimo: antenna placement experiments for distributed massive-MIMO uplinks", "dmimo"};
    std::string config_path, out_dir, format;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON config, or a CSV written by an earlier run");
    app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--out", out_dir, "directory for output files");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.require_subcommand(1, 1);
    for (const auto &name : command_names())
        app.add_subcommand(name, command_description(name))->fallthrough();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Json resolved;
    try
    {
        Json raw = config_path.empty() ? Json::object() : load_config_file(config_path);
        if (!raw.is_object())
            throw ConfigError("config", "must be a JSON object");
        if (seed)
            raw["seed"] = *seed;
        resolved = resolve_config(name, raw);
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    CommandResult result;
    try
    {
        result = execute(name, resolved);
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_compute;
    }

    const std::string fmt = format.empty() ? (csv_by_default(name) ? "csv" : "json") : format;
    const std::string document =
        fmt == "json" ? json_document(name, resolved, result).dump(2) + "\n" : csv_document(resolved, result);
    out << document;
    for (const auto &w : result.warnings)
        err << "warning: " << w << '\n';
    if (!out_dir.empty())
    {
        try
        {
            write_outputs(out_dir, name, fmt, document, resolved, result, err);
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return exit_compute;
        }
    }
    return exit_ok;
}

} // namespace dmimo::cli
