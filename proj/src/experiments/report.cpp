#include "gvar/experiments/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gvar::experiments {

std::string format_number(double x) { return json(x).dump(); }

CheckRecord comparison_record(std::string name, const std::string& label_a, const SumEstimate& a,
                              const std::string& label_b, const SumEstimate& b, const Comparison& c)
{
    CheckRecord r;
    r.name = std::move(name);
    r.values = {{label_a, a.value}, {label_b, b.value}, {"gap", c.gap}, {"tolerance", c.tolerance}};
    r.std_errors = {{label_a, a.std_error}, {label_b, b.std_error}};
    r.passed = c.consistent;
    if (!r.passed)
        r.detail = r.name + ": " + label_a + " = " + format_number(a.value) + ", " + label_b + " = " +
                   format_number(b.value) + ", combined std error = " + format_number(c.combined_std_error);
    return r;
}

bool SuiteReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.informational || c.passed; });
}

std::vector<const CheckRecord*> SuiteReport::failures() const
{
    std::vector<const CheckRecord*> out;
    for (const auto& c : checks)
        if (!c.informational && !c.passed) out.push_back(&c);
    return out;
}

json to_json(const SuiteReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks) {
        json rec{{"name", c.name}, {"values", c.values}, {"std_errors", c.std_errors}, {"verdict", c.verdict()}};
        if (!c.detail.empty()) rec["detail"] = c.detail;
        checks.push_back(std::move(rec));
    }
    return {{"suite", report.suite}, {"checks", std::move(checks)}, {"pass", report.passed()},
            {"results", report.results}, {"config", report.config}, {"version", kToolVersion}};
}

std::string render_json(const SuiteReport& report) { return to_json(report).dump(2) + "\n"; }

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

} // namespace

std::string render_csv(const SuiteReport& report)
{
    std::string out = "suite,check,quantity,value,std_error,verdict\r\n";
    for (const auto& c : report.checks) {
        for (const auto& [quantity, value] : c.values) {
            auto se = c.std_errors.find(quantity);
            out += csv_field(report.suite) + "," + csv_field(c.name) + "," + csv_field(quantity) + "," +
                   format_number(value) + "," + (se == c.std_errors.end() ? "" : format_number(se->second)) +
                   "," + c.verdict() + "\r\n";
        }
    }
    return out;
}

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::vector<double>& x, const std::vector<Series>& series)
{
    constexpr double width = 640, height = 400, left = 70, right = 150, top = 40, bottom = 50;
    const bool log_x = !x.empty() && *std::min_element(x.begin(), x.end()) > 0 &&
                       *std::max_element(x.begin(), x.end()) / *std::min_element(x.begin(), x.end()) > 100;
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };

    double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
    for (double v : x) {
        x0 = std::min(x0, tx(v));
        x1 = std::max(x1, tx(v));
    }
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v)) y1 = std::max(y1, v);
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    y1 *= 1.05;

    const double plot_w = width - left - right, plot_h = height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double v) { return top + plot_h - (v - y0) / (y1 - y0) * plot_h; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    auto label = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << title << "</text>\n"
        << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\"/>\n</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double v : x)
        svg << "<text x=\"" << num(px(v)) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">"
            << label(v) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = y0 + (y1 - y0) * i / 4.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">" << label(v)
            << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << x_label << (log_x ? " (log scale)" : "") << "</text>\n</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            svg << (first ? "" : " ") << num(px(x[i])) << "," << num(py(s.y[i]));
            first = false;
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i)
            if (std::isfinite(s.y[i]))
                svg << "<circle cx=\"" << num(px(x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\" fill=\""
                    << s.color << "\"/>\n";
        const double ly = top + 20 + 20 * static_cast<double>(k);
        svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 32
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + plot_w + 36 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace gvar::experiments
