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

#include "dmimo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmimo
{

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

namespace
{

std::vector<double> numbers_of(const std::string &line, const std::string &what, std::size_t lineno)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
        const auto b = cell.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        const auto e = cell.find_last_not_of(" \t\r");
        const std::string tok = cell.substr(b, e - b + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw std::invalid_argument(what + ": line " + std::to_string(lineno) + ": '" + tok +
                                        "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<double>> numeric_rows(const std::string &text, const std::string &what)
{
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line))
    {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#')
            continue;
        rows.push_back(numbers_of(line, what, lineno));
    }
    if (rows.empty())
        throw std::invalid_argument(what + ": no data");
    return rows;
}

std::size_t as_count(double v, const std::string &what)
{
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
        throw std::invalid_argument(what + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

} // namespace

Deployment parse_deployment_csv(const std::string &text)
{
    const auto rows = numeric_rows(text, "deployment csv");
    if (rows[0].size() != 2)
        throw std::invalid_argument("deployment csv: first row must be 'd,n'");
    const std::size_t d = as_count(rows[0][0], "deployment csv: d");
    const std::size_t n = as_count(rows[0][1], "deployment csv: n");
    if (rows.size() != n + 1)
        throw std::invalid_argument("deployment csv: expected " + std::to_string(n) + " points, found " +
                                    std::to_string(rows.size() - 1));
    std::vector<double> flat;
    flat.reserve(n * d);
    for (std::size_t i = 1; i <= n; ++i)
    {
        if (rows[i].size() != d)
            throw std::invalid_argument("deployment csv: point " + std::to_string(i - 1) + " does not have " +
                                        std::to_string(d) + " coordinates");
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return {d, std::move(flat)};
}

std::string format_deployment_csv(const Deployment &x)
{
    std::string s = std::to_string(x.dim()) + "," + std::to_string(x.size()) + "\n";
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        auto p = x.point(i);
        for (std::size_t a = 0; a < p.size(); ++a)
        {
            if (a)
                s += ',';
            s += format_double(p[a]);
        }
        s += '\n';
    }
    return s;
}

Deployment read_deployment_csv(const std::filesystem::path &path)
{
    return parse_deployment_csv(read_text_file(path));
}

void write_deployment_csv(const std::filesystem::path &path, const Deployment &x)
{
    write_text_file(path, format_deployment_csv(x));
}

UserDensity parse_tabulated_csv(const std::string &text, std::vector<double> origin)
{
    const auto rows = numeric_rows(text, "tabulated csv");
    if (rows[0].size() != 3)
        throw std::invalid_argument("tabulated csv: first row must be 'd,M,resolution'");
    const std::size_t d = as_count(rows[0][0], "tabulated csv: d");
    const double side = rows[0][1];
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("tabulated csv: M must be positive");
    const std::size_t res = as_count(rows[0][2], "tabulated csv: resolution");
    std::vector<double> values;
    for (std::size_t i = 1; i < rows.size(); ++i)
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    if (origin.empty())
        origin.assign(d, 0.0);
    return UserDensity::tabulated(d, side, res, std::move(values), std::move(origin));
}

UserDensity read_tabulated_csv(const std::filesystem::path &path, std::vector<double> origin)
{
    return parse_tabulated_csv(read_text_file(path), std::move(origin));
}

void CsvTable::add_row(const std::vector<double> &values)
{
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values)
        row.push_back(format_double(v));
    rows.push_back(std::move(row));
}

void write_csv(std::ostream &os, const CsvTable &table, const std::vector<std::string> &comments)
{
    for (const auto &c : comments)
        os << "# " << c << '\n';
    for (std::size_t j = 0; j < table.header.size(); ++j)
        os << (j ? "," : "") << table.header[j];
    os << '\n';
    for (const auto &row : table.rows)
    {
        if (row.size() != table.header.size())
            throw std::invalid_argument("write_csv: row width does not match the header");
        for (std::size_t j = 0; j < row.size(); ++j)
            os << (j ? "," : "") << row[j];
        os << '\n';
    }
}

std::string format_csv(const CsvTable &table, const std::vector<std::string> &comments)
{
    std::ostringstream os;
    write_csv(os, table, comments);
    return os.str();
}

namespace
{

std::string escape_xml(const std::string &s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

} // namespace

std::string line_chart_svg(const std::vector<Series> &series, const ChartOptions &opts)
{
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
    for (const auto &s : series)
    {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("line_chart_svg: series '" + s.name + "' has mismatched x and y");
        for (std::size_t k = 0; k < s.x.size(); ++k)
        {
            if (!std::isfinite(s.y[k]) || (opts.log_x && !(s.x[k] > 0.0)))
                continue;
            xmin = std::min(xmin, tx(s.x[k]));
            xmax = std::max(xmax, tx(s.x[k]));
            ymin = std::min(ymin, s.y[k]);
            ymax = std::max(ymax, s.y[k]);
        }
    }
    if (!std::isfinite(xmin))
        throw std::invalid_argument("line_chart_svg: nothing to plot");
    if (xmax == xmin)
    {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin)
    {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = opts.width - left - right, h = opts.height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - xmin) / (xmax - xmin) * w; };
    auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << opts.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape_xml(opts.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks
    for (int k = 0; k <= 4; ++k)
    {
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<line x1=\"" << left - 4 << "\" x2=\"" << left << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 7 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
           << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k)
    {
        const double t = xmin + (xmax - xmin) * k / 4.0;
        const double xv = opts.log_x ? std::pow(10.0, t) : t;
        const double x = left + (t - xmin) / (xmax - xmin) * w;
        os << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << top + h << "\" y2=\"" << top + h + 4
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << top + h + 18 << "\" text-anchor=\"middle\">" << fmt(xv, 3)
           << "</text>\n";
    }
    os << "<text x=\"" << left + w / 2 << "\" y=\"" << opts.height - 12 << "\" text-anchor=\"middle\">"
       << escape_xml(opts.x_label) << "</text>\n";
    os << "<text transform=\"translate(16," << top + h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape_xml(opts.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s)
    {
        const char *colour = palette[s % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < series[s].x.size(); ++k)
        {
            if (!std::isfinite(series[s].y[k]) || (opts.log_x && !(series[s].x[k] > 0.0)))
                continue;
            os << px(series[s].x[k]) << ',' << py(series[s].y[k]) << ' ';
        }
        os << "\"/>\n";
        const double ly = top + 16 + 16.0 * static_cast<double>(s);
        os << "<line x1=\"" << left + 10 << "\" x2=\"" << left + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
           << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + 36 << "\" y=\"" << ly + 4 << "\">" << escape_xml(series[s].name)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace dmimo
