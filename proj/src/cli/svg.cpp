#include "sjsdm/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sjsdm/error.hpp"
#include "sjsdm/model.hpp"

namespace sjsdm::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kW = 640, kH = 480, kPad = 56;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

std::string colour(double t) {  // t in [-1, 1]
    t = std::clamp(t, -1.0, 1.0);
    int r, g, b;
    if (t < 0) {
        r = static_cast<int>(255 * (1 + t));
        g = r;
        b = 255;
    } else {
        r = 255;
        g = static_cast<int>(255 * (1 - t));
        b = g;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
    double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
};

Frame frame(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double dx = 0.04 * (x1 - x0), dy = 0.04 * (y1 - y0);
    return {x0 - dx, x1 + dx, y0 - dy, y1 + dy};
}

std::string header(const std::string& title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
    return s.str();
}

std::string axes(const Frame& f) {
    std::ostringstream s;
    s << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\""
      << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << kH - kPad + 16 << "\" text-anchor=\"middle\">"
          << label(xv) << "</text>\n";
        s << "<text x=\"" << kPad - 6 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
          << label(yv) << "</text>\n";
    }
    return s.str();
}

void save(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << body << "</svg>\n";
}

}  // namespace

void svg_site_map(const fs::path& path, const std::string& title, const std::vector<double>& x,
                  const std::vector<double>& y, const std::vector<double>& values) {
    if (x.size() != y.size() || x.size() != values.size())
        throw DimensionMismatch("site map coordinates and values differ in length");
    if (x.empty()) throw InvalidArgument("site map needs at least one site");
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    const Frame f = frame(*xmin, *xmax, *ymin, *ymax);
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    std::string body = header(title) + axes(f);
    std::ostringstream s;
    for (std::size_t i = 0; i < x.size(); ++i)
        s << "<circle cx=\"" << num(f.px(x[i])) << "\" cy=\"" << num(f.py(y[i])) << "\" r=\"5\" fill=\""
          << colour(values[i] / scale) << "\" stroke=\"#333\" stroke-width=\"0.4\"/>\n";
    for (int i = 0; i <= 20; ++i) {
        const double t = -1.0 + i / 10.0;
        s << "<rect x=\"" << kW - kPad + 12 << "\" y=\"" << num(kH - kPad - (i + 1) * (kH - 2 * kPad) / 21.0)
          << "\" width=\"12\" height=\"" << num((kH - 2 * kPad) / 21.0 + 0.5) << "\" fill=\"" << colour(t)
          << "\"/>\n";
    }
    s << "<text x=\"" << kW - kPad + 18 << "\" y=\"" << kPad - 6 << "\" text-anchor=\"middle\">"
      << label(scale) << "</text>\n";
    s << "<text x=\"" << kW - kPad + 18 << "\" y=\"" << kH - kPad + 16 << "\" text-anchor=\"middle\">"
      << label(-scale) << "</text>\n";
    save(path, body + s.str());
}

void svg_trace(const fs::path& path, const std::string& title, const std::vector<double>& values,
               double reference) {
    if (values.empty()) throw InvalidArgument("trace plot needs at least one value");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double y0 = *lo, y1 = *hi;
    if (!std::isnan(reference)) {
        y0 = std::min(y0, reference);
        y1 = std::max(y1, reference);
    }
    const Frame f = frame(0.0, static_cast<double>(values.size() - 1), y0, y1);
    std::ostringstream s;
    const std::size_t stride = std::max<std::size_t>(1, values.size() / 2000);
    s << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"0.8\" points=\"";
    for (std::size_t t = 0; t < values.size(); t += stride)
        s << num(f.px(static_cast<double>(t))) << ',' << num(f.py(values[t])) << ' ';
    s << "\"/>\n";
    if (!std::isnan(reference))
        s << "<line x1=\"" << kPad << "\" x2=\"" << kW - kPad << "\" y1=\"" << num(f.py(reference))
          << "\" y2=\"" << num(f.py(reference)) << "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    save(path, header(title) + axes(f) + s.str());
}

void svg_boxplot(const fs::path& path, const std::string& title,
                 const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
    if (groups.empty()) throw InvalidArgument("box plot needs at least one group");
    double y0 = 0.0, y1 = 0.0;
    bool first = true;
    for (const auto& [name, v] : groups)
        for (double x : v) {
            if (std::isnan(x)) continue;
            y0 = first ? x : std::min(y0, x);
            y1 = first ? x : std::max(y1, x);
            first = false;
        }
    const Frame f = frame(0.0, static_cast<double>(groups.size()), y0, y1);
    std::ostringstream s;
    s << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\""
      << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s << "<text x=\"" << kPad - 6 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
          << label(yv) << "</text>\n";
    }
    const double slot = (kW - 2 * kPad) / static_cast<double>(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<double> v;
        for (double x : groups[g].second)
            if (!std::isnan(x)) v.push_back(x);
        const double cx = kPad + slot * (static_cast<double>(g) + 0.5);
        s << "<text x=\"" << num(cx) << "\" y=\"" << kH - kPad + 16 << "\" text-anchor=\"middle\">"
          << escape(groups[g].first) << "</text>\n";
        if (v.empty()) continue;
        const double q1 = empirical_quantile(v, 0.25), q2 = empirical_quantile(v, 0.5),
                     q3 = empirical_quantile(v, 0.75);
        const double iqr = q3 - q1;
        double lo = q1, hi = q3;
        for (double x : v) {
            if (x >= q1 - 1.5 * iqr) lo = std::min(lo, x);
            if (x <= q3 + 1.5 * iqr) hi = std::max(hi, x);
        }
        const double half = std::min(40.0, slot * 0.3);
        s << "<line x1=\"" << num(cx) << "\" x2=\"" << num(cx) << "\" y1=\"" << num(f.py(lo)) << "\" y2=\""
          << num(f.py(hi)) << "\" stroke=\"#333\"/>\n";
        s << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(f.py(q3)) << "\" width=\"" << num(2 * half)
          << "\" height=\"" << num(f.py(q1) - f.py(q3)) << "\" fill=\"#9ecae1\" stroke=\"#333\"/>\n";
        s << "<line x1=\"" << num(cx - half) << "\" x2=\"" << num(cx + half) << "\" y1=\"" << num(f.py(q2))
          << "\" y2=\"" << num(f.py(q2)) << "\" stroke=\"#08306b\" stroke-width=\"2\"/>\n";
        for (double x : v)
            if (x < lo || x > hi)
                s << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(f.py(x)) << "\" r=\"2.5\" fill=\"none\" stroke=\"#333\"/>\n";
    }
    save(path, header(title) + s.str());
}

}  // namespace sjsdm::cli
