#include "roofline/svg.hpp"

#include "roofline/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace roofline {

namespace {

std::string px(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
    std::string s(buf.data(), end);
    return s == "-0.00" ? "0.00" : s;
}

std::string num(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
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
        case '\'':
            out += "&apos;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

void check_inputs(const ChartDomain& d, const RenderStyle& style) {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(d.x_min) || !ok(d.x_max) || !ok(d.y_min) || !ok(d.y_max) || !(d.x_min < d.x_max) ||
        !(d.y_min < d.y_max)) {
        throw RenderError("degenerate chart domain");
    }
    if (style.margin_px < 0 || style.width_px <= 2 * style.margin_px ||
        style.height_px <= 2 * style.margin_px) {
        throw RenderError("render style leaves no plotting area");
    }
    if (style.ceiling_palette.empty()) {
        throw RenderError("render style needs at least one palette color");
    }
}

class Canvas {
public:
    Canvas(const ChartDomain& d, const RenderStyle& s) : d_(d), s_(s) {
        lx0_ = std::log2(d.x_min);
        lx1_ = std::log2(d.x_max);
        ly0_ = std::log2(d.y_min);
        ly1_ = std::log2(d.y_max);
    }

    double plot_w() const { return s_.width_px - 2.0 * s_.margin_px; }
    double plot_h() const { return s_.height_px - 2.0 * s_.margin_px; }
    double left() const { return s_.margin_px; }
    double right() const { return s_.width_px - s_.margin_px; }
    double top() const { return s_.margin_px; }
    double bottom() const { return s_.height_px - s_.margin_px; }

    double lx(double log2x) const { return left() + plot_w() * (log2x - lx0_) / (lx1_ - lx0_); }
    double ly(double log2y) const { return bottom() - plot_h() * (log2y - ly0_) / (ly1_ - ly0_); }

private:
    const ChartDomain& d_;
    const RenderStyle& s_;
    double lx0_, lx1_, ly0_, ly1_;
};

void write_header(std::ostringstream& out, const RenderStyle& style, const std::optional<std::string>& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width_px
        << "\" height=\"" << style.height_px << "\" viewBox=\"0 0 " << style.width_px << ' '
        << style.height_px << "\" font-family=\"" << escape(style.font_family) << "\" font-size=\"12\">\n"
        << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << style.width_px << "\" height=\""
        << style.height_px << "\" fill=\"#FFFFFF\"/>\n";
    if (title) {
        out << "<text class=\"title\" x=\"" << px(style.width_px / 2.0) << "\" y=\""
            << px(style.margin_px / 2.0) << "\" text-anchor=\"middle\" font-size=\"16\">" << escape(*title)
            << "</text>\n";
    }
}

void write_axes(std::ostringstream& out, const ChartGeometry& g, const Canvas& c) {
    out << "<g class=\"axes\" stroke=\"#000000\" fill=\"none\">\n"
        << "<rect x=\"" << px(c.left()) << "\" y=\"" << px(c.top()) << "\" width=\"" << px(c.plot_w())
        << "\" height=\"" << px(c.plot_h()) << "\"/>\n";
    std::ostringstream ticks;
    for (int n : g.x_ticks) {
        const double x = c.lx(n);
        ticks << "M" << px(x) << ' ' << px(c.bottom()) << "V" << px(c.bottom() + 5.0);
    }
    for (int n : g.y_ticks) {
        const double y = c.ly(n);
        ticks << "M" << px(c.left() - 5.0) << ' ' << px(y) << "H" << px(c.left());
    }
    if (!ticks.str().empty()) {
        out << "<path class=\"ticks\" d=\"" << ticks.str() << "\"/>\n";
    }
    out << "</g>\n<g class=\"tick-labels\" fill=\"#000000\">\n";
    for (int n : g.x_ticks) {
        out << "<text x=\"" << px(c.lx(n)) << "\" y=\"" << px(c.bottom() + 18.0)
            << "\" text-anchor=\"middle\">" << tick_label(n) << "</text>\n";
    }
    for (int n : g.y_ticks) {
        out << "<text x=\"" << px(c.left() - 8.0) << "\" y=\"" << px(c.ly(n) + 4.0)
            << "\" text-anchor=\"end\">" << tick_label(n) << "</text>\n";
    }
    out << "<text class=\"axis-title\" x=\"" << px((c.left() + c.right()) / 2.0) << "\" y=\""
        << px(c.bottom() + 40.0) << "\" text-anchor=\"middle\">Arithmetic intensity (FLOPs/Byte)</text>\n"
        << "<text class=\"axis-title\" x=\"" << px(c.left() - 45.0) << "\" y=\""
        << px((c.top() + c.bottom()) / 2.0) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << px(c.left() - 45.0) << ' ' << px((c.top() + c.bottom()) / 2.0)
        << ")\">Performance (GFLOP/s)</text>\n</g>\n";
}

void write_line(std::ostringstream& out, const Segment& s, const Canvas& c, const std::string& stroke,
                double width, const std::string& dataset) {
    out << "<line data-kind=\"" << to_string(s.kind) << "\" data-label=\"" << escape(s.ceiling_name)
        << "\" data-dataset=\"" << escape(dataset) << "\" data-top=\"" << (s.is_top ? "true" : "false")
        << "\" x1=\"" << px(c.lx(s.p0.lx)) << "\" y1=\"" << px(c.ly(s.p0.ly)) << "\" x2=\""
        << px(c.lx(s.p1.lx)) << "\" y2=\"" << px(c.ly(s.p1.ly)) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << px(width) << "\" stroke-linecap=\"round\"/>\n";
}

void write_ceiling_label(std::ostringstream& out, const Segment& s, const Canvas& c, const std::string& fill) {
    const double x0 = c.lx(s.p0.lx), y0 = c.ly(s.p0.ly);
    const double x1 = c.lx(s.p1.lx), y1 = c.ly(s.p1.ly);
    if (s.kind == SegmentKind::compute) {
        out << "<text class=\"ceiling-label\" x=\"" << px(x1 - 4.0) << "\" y=\"" << px(y1 - 5.0)
            << "\" text-anchor=\"end\" fill=\"" << fill << "\">" << escape(s.ceiling_name) << ": "
            << num(s.value) << " GFLOP/s</text>\n";
        return;
    }
    const double angle = std::atan2(y1 - y0, x1 - x0) * 180.0 / std::numbers::pi;
    const double mx = (x0 + x1) / 2.0, my = (y0 + y1) / 2.0 - 5.0;
    out << "<text class=\"ceiling-label\" x=\"" << px(mx) << "\" y=\"" << px(my)
        << "\" text-anchor=\"middle\" fill=\"" << fill << "\" transform=\"rotate(" << px(angle) << ' '
        << px(mx) << ' ' << px(my) << ")\">" << escape(s.ceiling_name) << ": "
        << num(s.value) << " GB/s</text>\n";
}

void write_point(std::ostringstream& out, const MarkedPoint& p, const ChartDomain& d, const RenderStyle& style,
                 const std::string& dataset, const std::string& kernel_fill) {
    const double cx = pixel_x(p.x, d, style);
    const double cy = pixel_y(p.y, d, style);
    std::string stroke = "#000000";
    std::string fill = "#FFFFFF";
    double r = 3.5;
    if (p.kind == PointKind::envelope_corner) {
        stroke = style.top_color;
        r = 5.0;
    } else if (p.kind == PointKind::kernel) {
        fill = kernel_fill;
        r = 4.5;
    }
    out << "<circle data-kind=\"" << to_string(p.kind) << "\" data-label=\"" << escape(p.label)
        << "\" data-dataset=\"" << escape(dataset) << "\" data-x=\"" << num(p.x) << "\" data-y=\"" << num(p.y)
        << "\" cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"" << px(r) << "\" fill=\"" << fill
        << "\" stroke=\"" << stroke << "\" stroke-width=\"1.50\"><title>" << escape(p.label) << ", " << num(p.x)
        << " FLOPs/Byte, " << num(p.y) << " GFLOP/s</title></circle>\n";
    if (style.show_labels && p.kind == PointKind::kernel) {
        out << "<text class=\"kernel-label\" x=\"" << px(cx + 7.0) << "\" y=\"" << px(cy - 7.0) << "\">"
            << escape(p.label) << "</text>\n";
    }
}

enum class ColorMode { per_ceiling, per_dataset };

std::string draw(std::span<const ChartGeometry> geometries, const RenderStyle& style,
                 const std::optional<std::string>& title, ColorMode mode, bool legend) {
    const ChartGeometry& first = geometries.front();
    check_inputs(first.domain, style);
    const Canvas canvas(first.domain, style);
    const auto& palette = style.ceiling_palette;

    std::ostringstream out;
    write_header(out, style, title);
    write_axes(out, first, canvas);

    out << "<g class=\"ceilings\">\n";
    for (std::size_t i = 0; i < geometries.size(); ++i) {
        const ChartGeometry& g = geometries[i];
        std::size_t j = 0;
        for (const auto& s : g.segments) {
            if (s.kind == SegmentKind::envelope) {
                continue;
            }
            const std::string& color =
                palette[(mode == ColorMode::per_dataset ? i : j) % palette.size()];
            write_line(out, s, canvas, color, 1.5, g.dataset_id);
            if (style.show_labels) {
                write_ceiling_label(out, s, canvas, color);
            }
            ++j;
        }
    }
    out << "</g>\n<g class=\"envelope\">\n";
    for (const auto& g : geometries) {
        for (const auto& s : g.segments) {
            if (s.kind == SegmentKind::envelope) {
                write_line(out, s, canvas, style.top_color, 3.0, g.dataset_id);
            }
        }
    }
    out << "</g>\n<g class=\"markers\">\n";
    for (std::size_t i = 0; i < geometries.size(); ++i) {
        const ChartGeometry& g = geometries[i];
        const std::string kernel_fill = mode == ColorMode::per_dataset ? palette[i % palette.size()] : "#000000";
        for (const auto& p : g.points) {
            write_point(out, p, g.domain, style, g.dataset_id, kernel_fill);
        }
    }
    out << "</g>\n";

    if (legend) {
        const double x = canvas.left() + 10.0;
        const double y = canvas.top() + 10.0;
        out << "<g class=\"legend\">\n<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"180.00\" height=\""
            << px(10.0 + 18.0 * static_cast<double>(geometries.size())) << "\" fill=\"#FFFFFF\" stroke=\"#000000\""
            << " stroke-width=\"0.50\"/>\n";
        for (std::size_t i = 0; i < geometries.size(); ++i) {
            const double row = y + 14.0 + 18.0 * static_cast<double>(i);
            out << "<g class=\"legend-entry\" data-dataset=\"" << escape(geometries[i].dataset_id) << "\">"
                << "<rect x=\"" << px(x + 8.0) << "\" y=\"" << px(row - 8.0) << "\" width=\"20.00\" height=\"10.00\""
                << " fill=\"" << palette[i % palette.size()] << "\"/>"
                << "<text x=\"" << px(x + 36.0) << "\" y=\"" << px(row + 1.0) << "\">"
                << escape(geometries[i].dataset_id) << "</text></g>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace

double pixel_x(double x, const ChartDomain& domain, const RenderStyle& style) {
    const double extent = style.width_px - 2.0 * style.margin_px;
    return style.margin_px + log2_map(x, domain.x_min, domain.x_max, extent);
}

double pixel_y(double y, const ChartDomain& domain, const RenderStyle& style) {
    const double extent = style.height_px - 2.0 * style.margin_px;
    return style.height_px - style.margin_px - log2_map(y, domain.y_min, domain.y_max, extent);
}

std::string render(const ChartGeometry& geometry, const RenderStyle& style,
                   const std::optional<std::string>& title) {
    return draw(std::span(&geometry, 1), style, title, ColorMode::per_ceiling, false);
}

std::string render_comparison(std::span<const ChartGeometry> geometries, const RenderStyle& style,
                              const std::optional<std::string>& title) {
    if (geometries.empty()) {
        throw RenderError("comparison needs at least one dataset");
    }
    if (geometries.size() > kMaxComparedDatasets) {
        throw CapacityError("comparison supports at most " + std::to_string(kMaxComparedDatasets) +
                            " datasets, got " + std::to_string(geometries.size()));
    }
    for (const auto& g : geometries) {
        if (!(g.domain == geometries.front().domain)) {
            throw RenderError("compared geometries must share one chart domain");
        }
    }
    return draw(geometries, style, title, ColorMode::per_dataset, true);
}

} // namespace roofline
