#pragma once

#include "roofline/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roofline {

inline constexpr std::string_view kTopColor = "#FFA500";
inline constexpr std::size_t kMaxComparedDatasets = 4;

struct RenderStyle {
    int width_px = 960;
    int height_px = 640;
    int margin_px = 60;
    std::string top_color{kTopColor};
    std::vector<std::string> ceiling_palette{"#1F77B4", "#2CA02C", "#D62728", "#9467BD",
                                             "#8C564B", "#E377C2", "#7F7F7F", "#17BECF"};
    std::string font_family = "sans-serif";
    bool show_labels = true;
};

// Standalone SVG 1.1 document. Every Segment becomes one <line> carrying
// data-kind/data-label, every MarkedPoint one <circle> carrying the same.
// Envelope lines are drawn last in top_color. Byte-deterministic.
std::string render(const ChartGeometry& geometry, const RenderStyle& style = {},
                   const std::optional<std::string>& title = std::nullopt);

// Overlays 1..4 geometries that share one domain, one color per dataset,
// with a legend naming each dataset_id. More than 4 throws CapacityError.
std::string render_comparison(std::span<const ChartGeometry> geometries, const RenderStyle& style = {},
                              const std::optional<std::string>& title = std::nullopt);

// Pixel position of a data value along each axis (y grows downward).
double pixel_x(double x, const ChartDomain& domain, const RenderStyle& style);
double pixel_y(double y, const ChartDomain& domain, const RenderStyle& style);

} // namespace roofline
