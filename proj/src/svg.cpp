#include <algorithm>
#include <cmath>

#include "cylarm/report.hpp"
#include "number_format.hpp"

namespace cylarm {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kGap = 30.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

const char* const kUnits[] = {"rad", "m", "m"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int precision = 2) {
    std::string s;
    append_fixed(s, v, precision);
    return s;
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

int label_precision(double step) {
    return std::clamp(static_cast<int>(-std::floor(std::log10(step))), 0, 6);
}

struct Panel {
    double x0, y0, w, h;
    double tmin, tmax, ymin, ymax;

    double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void polyline(std::string& out, const Panel& p, const std::vector<double>& t, const std::vector<double>& y,
              const char* color, bool dashed) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += dashed ? "\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\" points=\"" : "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ' ';
        out += fixed(p.px(t[i]));
        out += ',';
        out += fixed(p.py(y[i]));
    }
    out += "\"/>\n";
}

void text(std::string& out, double x, double y, const std::string& s, const char* anchor = "start",
          const std::string& extra = "") {
    out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
           escape(s) + "</text>\n";
}

void axes(std::string& out, const Panel& p, const std::string& ylabel, bool show_time_label) {
    out += "<rect x=\"" + fixed(p.x0) + "\" y=\"" + fixed(p.y0) + "\" width=\"" + fixed(p.w) + "\" height=\"" +
           fixed(p.h) + "\" fill=\"none\" stroke=\"#000\"/>\n";
    const double tstep = nice_step(p.tmax - p.tmin);
    for (double t = std::ceil(p.tmin / tstep) * tstep; t <= p.tmax + 1e-9 * tstep; t += tstep) {
        const double x = p.px(t);
        out += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(p.y0 + p.h) + "\" x2=\"" + fixed(x) + "\" y2=\"" +
               fixed(p.y0 + p.h + 5) + "\" stroke=\"#000\"/>\n";
        text(out, x, p.y0 + p.h + 18, fixed(t, label_precision(tstep)), "middle");
    }
    const double ystep = nice_step(p.ymax - p.ymin);
    for (double y = std::ceil(p.ymin / ystep) * ystep; y <= p.ymax + 1e-9 * ystep; y += ystep) {
        const double yy = p.py(y);
        out += "<line x1=\"" + fixed(p.x0 - 5) + "\" y1=\"" + fixed(yy) + "\" x2=\"" + fixed(p.x0 + p.w) +
               "\" y2=\"" + fixed(yy) + "\" stroke=\"#ddd\"/>\n";
        text(out, p.x0 - 8, yy + 4, fixed(y, label_precision(ystep)), "end");
    }
    const double ly = p.y0 + p.h / 2;
    text(out, 20, ly, ylabel, "middle", " transform=\"rotate(-90 20 " + fixed(ly) + ")\"");
    if (show_time_label) text(out, p.x0 + p.w / 2, p.y0 + p.h + 38, "t [s]", "middle");
}

}  // namespace

std::string render_svg(const std::vector<SimTrace>& traces, FigureKind kind, const std::optional<Vec3>& threshold) {
    if (traces.empty()) throw std::invalid_argument("render_svg: no traces");
    for (const auto& tr : traces) {
        if (tr.records.empty()) throw EmptyTrace();
    }

    const double height = kTop + 3 * kPanelHeight + 2 * kGap + kBottom;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(kWidth, 0) +
           "\" height=\"" + fixed(height, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(height, 0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    const std::string title = (kind == FigureKind::response ? "Joint response: " : "Tracking error: ") +
                              traces.front().scenario;
    text(out, kWidth / 2, 24, title, "middle", " font-size=\"15\"");

    double tmax = 0.0;
    for (const auto& tr : traces) tmax = std::max(tmax, tr.records.back().t);
    if (tmax <= 0.0) tmax = 1.0;

    for (int j = 0; j < 3; ++j) {
        std::vector<std::vector<double>> ts, ys;
        double ymin = 0.0, ymax = 0.0;
        bool first = true;
        auto widen = [&](double v) {
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        };
        std::vector<double> ref_t, ref_y;
        for (const auto& tr : traces) {
            std::vector<double> t, y;
            for (const auto& r : tr.records) {
                t.push_back(r.t);
                y.push_back(kind == FigureKind::response ? r.q[j] : r.e[j]);
                widen(y.back());
            }
            ts.push_back(std::move(t));
            ys.push_back(std::move(y));
        }
        if (kind == FigureKind::response) {
            for (const auto& r : traces.front().records) {
                ref_t.push_back(r.t);
                ref_y.push_back(r.q_d[j]);
                widen(r.q_d[j]);
            }
        } else if (threshold) {
            widen((*threshold)[j]);
            widen(-(*threshold)[j]);
        }
        if (ymax - ymin < 1e-12) {
            ymin -= 1.0;
            ymax += 1.0;
        }
        const double pad = 0.05 * (ymax - ymin);
        const Panel p{kLeft, kTop + j * (kPanelHeight + kGap), kWidth - kLeft - kRight, kPanelHeight,
                      0.0, tmax, ymin - pad, ymax + pad};

        const std::string sym = kind == FigureKind::response ? "q" : "e";
        axes(out, p, sym + std::to_string(j + 1) + " [" + kUnits[j] + "]", j == 2);
        out += "<g>\n";
        for (std::size_t k = 0; k < traces.size(); ++k) {
            polyline(out, p, ts[k], ys[k], kPalette[k % std::size(kPalette)], false);
        }
        if (kind == FigureKind::response) {
            polyline(out, p, ref_t, ref_y, "#000", true);
        } else if (threshold) {
            const double th = (*threshold)[j];
            polyline(out, p, {0.0, tmax}, {th, th}, "#777", true);
            polyline(out, p, {0.0, tmax}, {-th, -th}, "#777", true);
        }
        out += "</g>\n";
    }

    // Legend
    const double lx = kWidth - kRight + 20;
    double ly = kTop + 10;
    auto legend_entry = [&](const std::string& label, const char* color, bool dashed) {
        out += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 25) + "\" y2=\"" +
               fixed(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
               (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        text(out, lx + 32, ly + 4, label);
        ly += 20;
    };
    for (std::size_t k = 0; k < traces.size(); ++k) {
        legend_entry(traces[k].controller, kPalette[k % std::size(kPalette)], false);
    }
    if (kind == FigureKind::response) legend_entry("reference", "#000", true);
    if (kind == FigureKind::error && threshold) legend_entry("threshold", "#777", true);

    out += "</svg>\n";
    return out;
}

std::vector<std::filesystem::path> render_figures(const std::vector<SimTrace>& traces,
                                                  const std::filesystem::path& out_dir, const std::string& stem,
                                                  const std::optional<Vec3>& threshold) {
    const std::string response = render_svg(traces, FigureKind::response);
    const std::string error = render_svg(traces, FigureKind::error, threshold);
    const auto response_path = out_dir / (stem + "_response.svg");
    const auto error_path = out_dir / (stem + "_error.svg");
    write_text_file(response_path, response);
    write_text_file(error_path, error);
    return {response_path, error_path};
}

}  // namespace cylarm
