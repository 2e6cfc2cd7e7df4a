// SPDX-License-Identifier: Apache-2.0
//
// Static SVG figures: layout drawings, line plots and bar charts.

#pragma once

#include "qfuca/geometry.hpp"

#include <string>
#include <vector>

namespace qfuca {

std::string layout_svg(const QfUcaGeometry& geometry);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);

struct Bar {
    std::string group;  // bars sharing a group are drawn side by side
    std::string label;
    double value = 0.0;
};

std::string bar_chart_svg(const std::string& title, const std::string& y_label, const std::vector<Bar>& bars);

}  // namespace qfuca
