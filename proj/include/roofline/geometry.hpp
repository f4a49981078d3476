#pragma once

#include "roofline/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roofline {

// Axis bounds in data units: x in FLOPs/Byte, y in GFLOP/s.
struct ChartDomain {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    friend bool operator==(const ChartDomain&, const ChartDomain&) = default;
};

enum class SegmentKind { compute, bandwidth, envelope };

std::string_view to_string(SegmentKind kind);

// A point in (log2 x, log2 y) space.
struct LogPoint {
    double lx = 0.0;
    double ly = 0.0;

    friend bool operator==(const LogPoint&, const LogPoint&) = default;
};

struct Segment {
    std::string ceiling_name;
    SegmentKind kind = SegmentKind::compute;
    double value = 0.0;  // the ceiling's GFLOP/s or GB/s
    LogPoint p0;
    LogPoint p1;
    bool is_top = false;

    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class PointKind { intersection, kernel, envelope_corner };

std::string_view to_string(PointKind kind);

struct MarkedPoint {
    double x = 0.0;  // FLOPs/Byte
    double y = 0.0;  // GFLOP/s
    std::string label;
    PointKind kind = PointKind::intersection;
    // Ceiling pair for intersections and the envelope corner; empty for kernels.
    CeilingPair pair;
    // Kernel name for kernel markers; empty otherwise.
    std::string kernel;

    friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

struct ChartGeometry {
    ChartDomain domain;
    std::vector<Segment> segments;
    std::vector<MarkedPoint> points;
    std::vector<int> x_ticks;  // exponents of two
    std::vector<int> y_ticks;
    std::string dataset_id;

    friend bool operator==(const ChartGeometry&, const ChartGeometry&) = default;
};

// Fallback x-range when nothing constrains it.
inline constexpr int kFallbackXMinExp = -4;
inline constexpr int kFallbackXMaxExp = 6;

// Covers every ridge point and trial intensity on x; every compute ceiling,
// achieved value and bandwidth line start (B * x_min) on y. Each side is
// widened to the enclosing power of two plus one octave.
ChartDomain default_domain(std::span<const MachineProfile> profiles,
                           std::span<const KernelTrial> trials);

// Same as default_domain but with caller-supplied x bounds; y is derived
// from the rules above using the overridden x_min.
ChartDomain domain_with_x(std::span<const MachineProfile> profiles,
                          std::span<const KernelTrial> trials, double x_min, double x_max);

std::vector<Segment> build_segments(const MachineProfile& profile, const ChartDomain& domain);

std::vector<MarkedPoint> intersection_points(const MachineProfile& profile, const ChartDomain& domain);

std::vector<MarkedPoint> kernel_markers(std::span<const KernelTrial> trials);

// extent * log2(value/lo) / log2(hi/lo), unclamped.
double log2_map(double value, double lo, double hi, double extent);

// Integer exponents n with lo <= 2^n <= hi.
std::vector<int> power_of_two_ticks(double lo, double hi);

// Tick text: plain decimal below 1024, "2^n" from 1024 up.
std::string tick_label(int exponent);

// Segments, intersections, kernel markers and ticks for one dataset.
ChartGeometry build_geometry(const MachineProfile& profile, std::span<const KernelTrial> trials,
                             const ChartDomain& domain, std::string dataset_id);

} // namespace roofline
