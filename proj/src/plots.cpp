#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ujc/errors.hpp"
#include "ujc/pipeline.hpp"

namespace ujc {

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;
    double px0 = 0, px1 = 1;

    double map(double v) const {
        double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi, x = log ? std::log10(v) : v;
        if (b == a) return (px0 + px1) / 2;
        return px0 + (x - a) / (b - a) * (px1 - px0);
    }
    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            for (double d = std::floor(std::log10(lo)); d <= std::ceil(std::log10(hi)); d += 1) {
                double v = std::pow(10.0, d);
                if (v >= lo * 0.999 && v <= hi * 1.001) t.push_back(v);
            }
            if (t.size() < 2) t = {lo, hi};
        } else {
            for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
        }
        return t;
    }
};

double parse_number(const std::string& s, bool& ok) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        ok = used == s.size();
        return v;
    } catch (const std::logic_error&) {
        ok = false;
        return 0;
    }
}

void pad_range(double& lo, double& hi) {
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        double m = (hi - lo) * 0.05;
        lo -= m;
        hi += m;
    }
}

std::string frame(const PlotSpec& spec, const Axis& xa, const Axis& ya, const std::vector<std::pair<double, std::string>>& xticks) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
       << kW << ' ' << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << f2(kW / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(spec.title) << "</text>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\"" << kH - kBottom
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
       << "\" stroke=\"black\"/>\n";
    for (double t : ya.ticks()) {
        double y = ya.map(t);
        os << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << f2(y) << "\" x2=\"" << kLeft << "\" y2=\"" << f2(y)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << f2(y + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << label_num(t) << "</text>\n";
    }
    for (const auto& [x, text] : xticks) {
        os << "<line x1=\"" << f2(x) << "\" y1=\"" << kH - kBottom << "\" x2=\"" << f2(x) << "\" y2=\"" << kH - kBottom + 4
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f2(x) << "\" y=\"" << kH - kBottom + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << escape(text) << "</text>\n";
    }
    os << "<text x=\"" << f2((kLeft + kW - kRight) / 2) << "\" y=\"" << kH - 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(spec.x) << "</text>\n";
    os << "<text x=\"18\" y=\"" << f2((kTop + kH - kBottom) / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\" transform=\"rotate(-90 18 " << f2((kTop + kH - kBottom) / 2) << ")\">" << escape(spec.y)
       << "</text>\n";
    (void)xa;
    return os.str();
}

}  // namespace

PlotKind parse_plot_kind(const std::string& s) {
    if (s == "box") return PlotKind::Box;
    if (s == "violin") return PlotKind::Violin;
    if (s == "scatter-fit" || s == "scatter") return PlotKind::ScatterFit;
    throw InvalidArgument("unknown plot kind '" + s + "'");
}

std::string render_plot(const Table& t, const PlotSpec& spec) {
    if (t.rows.empty()) throw InvalidArgument("nothing to plot: no rows");
    const int cx = t.column(spec.x), cy = t.column(spec.y);
    std::ostringstream body;

    if (spec.kind == PlotKind::ScatterFit) {
        std::vector<double> xs, ys;
        for (const auto& row : t.rows) {
            bool okx, oky;
            double x = parse_number(row[cx], okx), y = parse_number(row[cy], oky);
            if (!okx || !oky) continue;
            if (spec.log_axes && (x <= 0 || y <= 0)) continue;
            xs.push_back(x);
            ys.push_back(y);
        }
        if (xs.empty()) throw InvalidArgument("nothing to plot: no numeric points");
        Axis xa, ya;
        xa.log = ya.log = spec.log_axes;
        xa.lo = *std::min_element(xs.begin(), xs.end());
        xa.hi = *std::max_element(xs.begin(), xs.end());
        ya.lo = *std::min_element(ys.begin(), ys.end());
        ya.hi = *std::max_element(ys.begin(), ys.end());
        if (spec.log_axes) {
            xa.lo /= 1.2, xa.hi *= 1.2, ya.lo /= 1.2, ya.hi *= 1.2;
        } else {
            pad_range(xa.lo, xa.hi);
            pad_range(ya.lo, ya.hi);
        }
        xa.px0 = kLeft, xa.px1 = kW - kRight;
        ya.px0 = kH - kBottom, ya.px1 = kTop;
        std::vector<std::pair<double, std::string>> xticks;
        for (double v : xa.ticks()) xticks.emplace_back(xa.map(v), label_num(v));
        body << frame(spec, xa, ya, xticks);
        for (std::size_t i = 0; i < xs.size(); ++i)
            body << "<circle cx=\"" << f2(xa.map(xs[i])) << "\" cy=\"" << f2(ya.map(ys[i]))
                 << "\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
        bool distinct = std::any_of(xs.begin(), xs.end(), [&](double v) { return v != xs[0]; });
        if (spec.log_axes && distinct) {
            PowerFit f = fit_power_law(xs, ys);
            double a = xa.lo, b = xa.hi;
            body << "<line x1=\"" << f2(xa.map(a)) << "\" y1=\"" << f2(ya.map(f.prefactor * std::pow(a, f.exponent)))
                 << "\" x2=\"" << f2(xa.map(b)) << "\" y2=\"" << f2(ya.map(f.prefactor * std::pow(b, f.exponent)))
                 << "\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
            body << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14
                 << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"crimson\">fit: y = " << label_num(f.prefactor)
                 << " x^" << label_num(f.exponent) << "</text>\n";
        }
        body << "</svg>\n";
        return body.str();
    }

    // grouped distributions
    std::vector<std::string> keys;
    std::map<std::string, std::vector<double>> groups;
    for (const auto& row : t.rows) {
        bool ok;
        double y = parse_number(row[cy], ok);
        if (!ok) continue;
        if (!groups.count(row[cx])) keys.push_back(row[cx]);
        groups[row[cx]].push_back(y);
    }
    if (keys.empty()) throw InvalidArgument("nothing to plot: no numeric values");
    bool numeric = std::all_of(keys.begin(), keys.end(), [](const std::string& k) {
        bool ok;
        parse_number(k, ok);
        return ok;
    });
    if (numeric)
        std::stable_sort(keys.begin(), keys.end(), [](const std::string& a, const std::string& b) {
            return std::stod(a) < std::stod(b);
        });
    Axis ya;
    ya.lo = 1e300, ya.hi = -1e300;
    for (const auto& [k, v] : groups)
        for (double y : v) ya.lo = std::min(ya.lo, y), ya.hi = std::max(ya.hi, y);
    pad_range(ya.lo, ya.hi);
    ya.px0 = kH - kBottom, ya.px1 = kTop;
    const double slot = (kW - kLeft - kRight) / keys.size();
    std::vector<std::pair<double, std::string>> xticks;
    for (std::size_t i = 0; i < keys.size(); ++i) xticks.emplace_back(kLeft + slot * (i + 0.5), keys[i]);
    body << frame(spec, Axis{}, ya, xticks);
    const double half = std::min(30.0, slot * 0.38);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const double cxp = kLeft + slot * (i + 0.5);
        const auto& v = groups[keys[i]];
        Quantiles q = quantiles(v);
        if (spec.kind == PlotKind::Box) {
            body << "<line x1=\"" << f2(cxp) << "\" y1=\"" << f2(ya.map(q.min)) << "\" x2=\"" << f2(cxp) << "\" y2=\""
                 << f2(ya.map(q.max)) << "\" stroke=\"black\"/>\n";
            body << "<rect x=\"" << f2(cxp - half) << "\" y=\"" << f2(ya.map(q.q3)) << "\" width=\"" << f2(2 * half)
                 << "\" height=\"" << f2(std::max(0.5, ya.map(q.q1) - ya.map(q.q3)))
                 << "\" fill=\"lightsteelblue\" stroke=\"black\"/>\n";
            body << "<line x1=\"" << f2(cxp - half) << "\" y1=\"" << f2(ya.map(q.median)) << "\" x2=\"" << f2(cxp + half)
                 << "\" y2=\"" << f2(ya.map(q.median)) << "\" stroke=\"crimson\" stroke-width=\"2\"/>\n";
            continue;
        }
        // violin: Gaussian KDE with Silverman bandwidth, mirrored
        double mean = 0, var = 0;
        for (double y : v) mean += y;
        mean /= v.size();
        for (double y : v) var += (y - mean) * (y - mean);
        double sd = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
        double bw = 1.06 * std::max(sd, (ya.hi - ya.lo) * 0.01) * std::pow(static_cast<double>(v.size()), -0.2);
        const int k = 48;
        std::vector<double> ys(k + 1), dens(k + 1);
        double peak = 0;
        for (int j = 0; j <= k; ++j) {
            ys[j] = q.min + (q.max - q.min) * j / k;
            double d = 0;
            for (double y : v) d += std::exp(-0.5 * ((ys[j] - y) / bw) * ((ys[j] - y) / bw));
            dens[j] = d;
            peak = std::max(peak, d);
        }
        body << "<polygon points=\"";
        for (int j = 0; j <= k; ++j) body << f2(cxp + half * dens[j] / peak) << ',' << f2(ya.map(ys[j])) << ' ';
        for (int j = k; j >= 0; --j) body << f2(cxp - half * dens[j] / peak) << ',' << f2(ya.map(ys[j])) << ' ';
        body << "\" fill=\"lightsteelblue\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
        body << "<circle cx=\"" << f2(cxp) << "\" cy=\"" << f2(ya.map(q.median)) << "\" r=\"3\" fill=\"crimson\"/>\n";
    }
    body << "</svg>\n";
    return body.str();
}

}  // namespace ujc
