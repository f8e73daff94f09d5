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

#ifndef DMIMO_IO_HPP
#define DMIMO_IO_HPP

#include "dmimo/density.hpp"
#include "dmimo/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmimo
{

// Shortest round-trip representation with 17 significant digits.
std::string format_double(double v);

// Deployment CSV: a "d,n" row followed by one antenna per row. Lines starting
// with '#' are skipped.
Deployment parse_deployment_csv(const std::string &text);
std::string format_deployment_csv(const Deployment &x);
Deployment read_deployment_csv(const std::filesystem::path &path);
void write_deployment_csv(const std::filesystem::path &path, const Deployment &x);

// Tabulated density CSV: a "d,M,resolution" row, then resolution^d grid values
// in row-major order (last coordinate fastest), in any row layout.
UserDensity parse_tabulated_csv(const std::string &text, std::vector<double> origin = {});
UserDensity read_tabulated_csv(const std::filesystem::path &path, std::vector<double> origin = {});

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double> &values);
};

// Writes optional "# " comment lines, the header and the rows.
void write_csv(std::ostream &os, const CsvTable &table, const std::vector<std::string> &comments = {});
std::string format_csv(const CsvTable &table, const std::vector<std::string> &comments = {});

struct Series
{
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartOptions
{
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 640;
    int height = 420;
};

// Minimal SVG line chart with axes, ticks and a legend.
std::string line_chart_svg(const std::vector<Series> &series, const ChartOptions &opts);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace dmimo

#endif
