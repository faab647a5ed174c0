// Copyright 2026 The Blockade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal SVG line plots, enough to eyeball a trajectory or a sweep without
// an external plotting toolchain.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "blockade/errors.hpp"

namespace blockade::svg {

struct Series {
    std::string label;
    std::vector<double> y;  ///< non-finite entries break the line
    std::string color = "#1f77b4";
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 720;
    int height = 420;
};

namespace detail {
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}
}  // namespace detail

inline void write_line_plot(const std::string& path, const std::vector<double>& x,
                            const std::vector<Series>& series, const PlotOptions& opt) {
    const double ml = 70, mr = 20, mt = 36, mb = 50;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
    auto usable = [&](double v) { return std::isfinite(v) && (!opt.log_y || v > 0.0); };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (double v : x) {
        x0 = std::min(x0, v);
        x1 = std::max(x1, v);
    }
    for (const auto& s : series)
        for (double v : s.y)
            if (usable(v)) {
                y0 = std::min(y0, ty(v));
                y1 = std::max(y1, ty(v));
            }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return mt + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape(opt.title) << "</text>\n"
       << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 12 << "\" text-anchor=\"middle\">"
       << detail::escape(opt.x_label) << "</text>\n"
       << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << mt + ph / 2 << ")\">" << detail::escape(opt.y_label) << (opt.log_y ? " (log10)" : "") << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
        os << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 16 << "\" text-anchor=\"middle\">"
           << detail::num(fx) << "</text>\n"
           << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph - (fy - y0) / (y1 - y0) * ph + 4
           << "\" text-anchor=\"end\">" << detail::num(fy) << "</text>\n";
    }
    int legend = 0;
    for (const auto& s : series) {
        std::string path_data;
        bool pen_down = false;
        for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
            if (!usable(s.y[i])) {
                pen_down = false;
                continue;
            }
            path_data += (pen_down ? " L" : " M") + detail::num(px(x[i])) + "," + detail::num(py(s.y[i]));
            pen_down = true;
        }
        os << "<path d=\"" << path_data << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\"/>\n";
        os << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 14 * legend++ << "\" text-anchor=\"end\" fill=\""
           << s.color << "\">" << detail::escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace blockade::svg
