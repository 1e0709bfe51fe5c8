#include "pscb/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pscb/errors.hpp"

namespace pscb {

namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_double(std::string_view field, int line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line, "'" + std::string(field) + "' is not a number");
    }
    return value;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v, int precision = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(precision);
    s << v;
    return s.str();
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string export_csv(const Aggregate& agg) {
    std::string out = "t";
    for (const auto& c : agg.curves) {
        out += ',' + c.label + "_mean," + c.label + "_std";
    }
    out += '\n';
    if (agg.curves.empty()) return out;
    for (std::size_t i = 0; i < static_cast<std::size_t>(agg.horizon); ++i) {
        out += std::to_string(i + 1);
        for (const auto& c : agg.curves) {
            out += ',';
            append_double(out, c.mean.at(i));
            out += ',';
            append_double(out, c.std.at(i));
        }
        out += '\n';
    }
    return out;
}

Aggregate parse_results_csv(std::string_view text) {
    Aggregate agg;
    int line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        auto fields = split(line, ',');
        if (!have_header) {
            if (fields.front() != "t" || fields.size() % 2 != 1) throw ParseError(line_no, "malformed results header");
            for (std::size_t i = 1; i < fields.size(); i += 2) {
                auto mean_col = fields[i];
                auto std_col = fields[i + 1];
                constexpr std::string_view kMean = "_mean";
                constexpr std::string_view kStd = "_std";
                if (mean_col.size() <= kMean.size() || !mean_col.ends_with(kMean) || !std_col.ends_with(kStd)) {
                    throw ParseError(line_no, "expected <label>_mean,<label>_std column pair");
                }
                PolicyCurve curve;
                curve.label = std::string(mean_col.substr(0, mean_col.size() - kMean.size()));
                if (std_col.substr(0, std_col.size() - kStd.size()) != curve.label) {
                    throw ParseError(line_no, "mean/std columns name different labels");
                }
                agg.curves.push_back(std::move(curve));
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 1 + 2 * agg.curves.size()) throw ParseError(line_no, "ragged results row");
        const double t = parse_double(fields[0], line_no);
        if (t != static_cast<double>(agg.horizon + 1)) throw ParseError(line_no, "time column is not consecutive");
        ++agg.horizon;
        for (std::size_t i = 0; i < agg.curves.size(); ++i) {
            agg.curves[i].mean.push_back(parse_double(fields[1 + 2 * i], line_no));
            agg.curves[i].std.push_back(parse_double(fields[2 + 2 * i], line_no));
        }
    }
    if (!have_header) throw ParseError(line_no, "empty results file");
    return agg;
}

std::string emit_svg(const Aggregate& agg, const SvgOptions& opt) {
    if (agg.curves.empty() || agg.horizon < 1) throw InvalidArgument("cannot plot an aggregate without curves");

    const double left = 70, right = 170, top = 40, bottom = 50;
    const double plot_w = opt.width - left - right;
    const double plot_h = opt.height - top - bottom;
    if (plot_w <= 0 || plot_h <= 0) throw InvalidArgument("SVG canvas too small");

    double y_min = 0.0;
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& c : agg.curves) {
        for (std::size_t i = 0; i < c.mean.size(); ++i) {
            const double band = opt.std_band ? c.std[i] : 0.0;
            y_min = std::min(y_min, c.mean[i] - band);
            y_max = std::max(y_max, c.mean[i] + band);
        }
    }
    if (!(y_max > y_min)) y_max = y_min + 1.0;

    const double horizon = agg.horizon;
    auto x_of = [&](double t) { return left + (horizon > 1 ? (t - 1.0) / (horizon - 1.0) : 0.5) * plot_w; };
    auto y_of = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };

    const std::size_t stride =
        std::max<std::size_t>(1, (static_cast<std::size_t>(agg.horizon) + opt.max_points - 1) / std::max<std::size_t>(opt.max_points, 1));
    std::vector<std::size_t> samples;
    for (std::size_t i = 0; i < static_cast<std::size_t>(agg.horizon); i += stride) samples.push_back(i);
    if (samples.back() != static_cast<std::size_t>(agg.horizon) - 1) samples.push_back(static_cast<std::size_t>(agg.horizon) - 1);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << xml_escape(opt.title) << "</text>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\"" << fmt(left + plot_w) << "\" y2=\""
        << fmt(top + plot_h) << "\"/>\n"
        << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(top + plot_h)
        << "\"/>\n</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = 1.0 + (horizon - 1.0) * i / 5.0;
        const double v = y_min + (y_max - y_min) * i / 5.0;
        svg << "<text x=\"" << fmt(x_of(t)) << "\" y=\"" << fmt(top + plot_h + 16) << "\" text-anchor=\"middle\">"
            << static_cast<long long>(std::llround(t)) << "</text>\n"
            << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(y_of(v) + 4) << "\" text-anchor=\"end\">" << fmt(v, 1)
            << "</text>\n";
    }
    svg << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(opt.height - 10.0)
        << "\" text-anchor=\"middle\">" << xml_escape(opt.x_label) << "</text>\n"
        << "<text x=\"16\" y=\"" << fmt(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt(top + plot_h / 2) << ")\">" << xml_escape(opt.y_label) << "</text>\n</g>\n";

    for (std::size_t ci = 0; ci < agg.curves.size(); ++ci) {
        const auto& c = agg.curves[ci];
        const char* color = kPalette[ci % std::size(kPalette)];
        if (opt.std_band) {
            svg << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
            for (std::size_t i : samples) svg << fmt(x_of(i + 1.0)) << ',' << fmt(y_of(c.mean[i] + c.std[i])) << ' ';
            for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
                svg << fmt(x_of(*it + 1.0)) << ',' << fmt(y_of(c.mean[*it] - c.std[*it])) << ' ';
            }
            svg << "\"/>\n";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (k) svg << ' ';
            svg << fmt(x_of(samples[k] + 1.0)) << ',' << fmt(y_of(c.mean[samples[k]]));
        }
        svg << "\"><title>" << xml_escape(c.label) << "</title></polyline>\n";

        const double ly = top + 10 + 20.0 * static_cast<double>(ci);
        svg << "<line x1=\"" << fmt(left + plot_w + 15) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + plot_w + 40)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fmt(left + plot_w + 46) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(c.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace pscb
