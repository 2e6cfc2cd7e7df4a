// SPDX-License-Identifier: Apache-2.0
#include "qfuca/svg.hpp"

#include "qfuca/csv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace qfuca {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string f(double x) { return format_number(std::round(x * 100.0) / 100.0); }

std::string header(int w, int h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
           "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) + "\" font-family=\"sans-serif\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Round-number axis ticks covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

}  // namespace

std::string layout_svg(const QfUcaGeometry& g) {
    const DimensionSpec& s = g.spec;
    const double RE = s.entire_radius();
    const int size = 480;
    const double margin = 30.0;
    const double scale = (size / 2.0 - margin) / (RE > 0 ? RE : 1.0);
    auto X = [&](double x) { return size / 2.0 + x * scale; };
    auto Y = [&](double y) { return size / 2.0 - y * scale; };

    std::ostringstream os;
    os << header(size, size + 24);
    os << "<text x=\"" << size / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << esc(describe(s)) << ", "
       << g.n_elements() << " elements</text>\n";
    os << "<g transform=\"translate(0,24)\">\n";

    // one circle per cell and level, deduplicated by centre
    const auto positions = realize_positions(s);
    for (int n = s.dimension(); n >= 1; --n) {
        std::size_t inner = 1;
        for (int m = 0; m < n - 1; ++m) inner *= static_cast<std::size_t>(s.cells[m]);
        const std::size_t cell = inner * static_cast<std::size_t>(s.cells[n - 1]);
        std::set<std::pair<long long, long long>> seen;
        for (std::size_t base = 0; base < positions.size(); base += cell) {
            Point c = Point::Zero();
            // centre of the nD cell: mean of its ring points
            for (int k = 0; k < s.cells[n - 1]; ++k) {
                Point ring = Point::Zero();
                for (std::size_t i = 0; i < inner; ++i) ring += positions[base + k * inner + i];
                c += ring / static_cast<double>(inner);
            }
            c /= s.cells[n - 1];
            const auto key = std::make_pair(std::llround(c.x() * 1e6), std::llround(c.y() * 1e6));
            if (!seen.insert(key).second) continue;
            os << "<circle cx=\"" << f(X(c.x())) << "\" cy=\"" << f(Y(c.y())) << "\" r=\"" << f(s.radii[n - 1] * scale)
               << "\" fill=\"none\" stroke=\"" << kPalette[(n - 1) % 8] << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
        }
    }
    std::vector<int> multiplicity(g.n_elements(), 0);
    for (int e : g.logical_map) ++multiplicity[e];
    for (std::size_t e = 0; e < g.physical.size(); ++e) {
        const bool shared = multiplicity[e] > 1;
        os << "<circle cx=\"" << f(X(g.physical[e].x())) << "\" cy=\"" << f(Y(g.physical[e].y())) << "\" r=\""
           << (shared ? 5 : 3.5) << "\" fill=\"" << (shared ? "#d62728" : "black") << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series) {
    const int W = 640, H = 420;
    const double l = 70, r = 180, t = 40, b = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (first) {
                x0 = x1 = s.x[i];
                y0 = y1 = s.y[i];
                first = false;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    y0 = std::min(y0, 0.0);
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    y1 += 0.05 * (y1 - y0);
    auto X = [&](double x) { return l + (x - x0) / (x1 - x0) * (W - l - r); };
    auto Y = [&](double y) { return H - b - (y - y0) / (y1 - y0) * (H - t - b); };

    std::ostringstream os;
    os << header(W, H);
    os << "<text x=\"" << (l + W - r) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title) << "</text>\n";
    os << "<line x1=\"" << l << "\" y1=\"" << H - b << "\" x2=\"" << W - r << "\" y2=\"" << H - b << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << l << "\" y1=\"" << t << "\" x2=\"" << l << "\" y2=\"" << H - b << "\" stroke=\"black\"/>\n";
    for (double v : ticks(x0, x1))
        os << "<text x=\"" << f(X(v)) << "\" y=\"" << H - b + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << format_number(v) << "</text>\n";
    for (double v : ticks(y0, y1)) {
        os << "<line x1=\"" << l << "\" y1=\"" << f(Y(v)) << "\" x2=\"" << W - r << "\" y2=\"" << f(Y(v))
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << l - 6 << "\" y=\"" << f(Y(v) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_number(v) << "</text>\n";
    }
    os << "<text x=\"" << (l + W - r) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << esc(x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << (t + H - b) / 2 << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">"
       << esc(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % 8];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) os << (i ? " " : "") << f(X(s.x[i])) << "," << f(Y(s.y[i]));
        os << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            os << "<circle cx=\"" << f(X(s.x[i])) << "\" cy=\"" << f(Y(s.y[i])) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        const double ly = t + 10 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << W - r + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - r + 32 << "\" y2=\"" << ly << "\" stroke=\""
           << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - r + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << esc(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label, const std::vector<Bar>& bars) {
    std::vector<std::string> groups, labels;
    for (const auto& b : bars) {
        if (std::find(groups.begin(), groups.end(), b.group) == groups.end()) groups.push_back(b.group);
        if (std::find(labels.begin(), labels.end(), b.label) == labels.end()) labels.push_back(b.label);
    }
    const int W = std::max(480, 120 + static_cast<int>(bars.size()) * 34 + static_cast<int>(groups.size()) * 20 + 170);
    const int H = 420;
    const double l = 70, r = 170, t = 40, b = 60;
    double top = 0;
    for (const auto& bar : bars) top = std::max(top, bar.value);
    if (!(top > 0)) top = 1;
    top *= 1.08;
    auto Y = [&](double y) { return H - b - y / top * (H - t - b); };

    std::ostringstream os;
    os << header(W, H);
    os << "<text x=\"" << (l + W - r) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title) << "</text>\n";
    for (double v : ticks(0, top)) {
        os << "<line x1=\"" << l << "\" y1=\"" << f(Y(v)) << "\" x2=\"" << W - r << "\" y2=\"" << f(Y(v))
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << l - 6 << "\" y=\"" << f(Y(v) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << format_number(v) << "</text>\n";
    }
    os << "<text transform=\"translate(18," << (t + H - b) / 2 << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">"
       << esc(y_label) << "</text>\n";
    const double slot = (W - l - r) / std::max<double>(1.0, static_cast<double>(bars.size() + groups.size()));
    double x = l + slot / 2;
    for (const auto& g : groups) {
        const double gx0 = x;
        for (const auto& bar : bars) {
            if (bar.group != g) continue;
            const auto li = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), bar.label) - labels.begin());
            os << "<rect x=\"" << f(x) << "\" y=\"" << f(Y(bar.value)) << "\" width=\"" << f(slot * 0.9) << "\" height=\""
               << f(Y(0) - Y(bar.value)) << "\" fill=\"" << kPalette[li % 8] << "\"/>\n";
            os << "<text x=\"" << f(x + slot * 0.45) << "\" y=\"" << f(Y(bar.value) - 4)
               << "\" text-anchor=\"middle\" font-size=\"10\">" << format_number(std::round(bar.value * 100) / 100)
               << "</text>\n";
            x += slot;
        }
        os << "<text x=\"" << f((gx0 + x) / 2) << "\" y=\"" << H - b + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
           << esc(g) << "</text>\n";
        x += slot;
    }
    os << "<line x1=\"" << l << "\" y1=\"" << H - b << "\" x2=\"" << W - r << "\" y2=\"" << H - b << "\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const double ly = t + 10 + 18.0 * static_cast<double>(k);
        os << "<rect x=\"" << W - r + 12 << "\" y=\"" << ly - 6 << "\" width=\"14\" height=\"12\" fill=\"" << kPalette[k % 8]
           << "\"/>\n";
        os << "<text x=\"" << W - r + 32 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << esc(labels[k]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace qfuca
