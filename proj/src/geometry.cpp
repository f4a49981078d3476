#include "roofline/geometry.hpp"

#include "roofline/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace roofline {

namespace {

// Exact floor/ceil of log2 for positive finite doubles.
int floor_log2(double v) {
    int e = 0;
    std::frexp(v, &e);  // v = m * 2^e, m in [0.5, 1)
    return e - 1;
}

int ceil_log2(double v) {
    int e = 0;
    const double m = std::frexp(v, &e);
    return m == 0.5 ? e - 1 : e;
}

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return lo > hi; }
};

std::pair<double, double> widen(const Range& r) {
    return {std::ldexp(1.0, floor_log2(r.lo) - 1), std::ldexp(1.0, ceil_log2(r.hi) + 1)};
}

Range y_values(std::span<const MachineProfile> profiles, std::span<const KernelTrial> trials,
               double x_min) {
    Range y;
    for (const auto& p : profiles) {
        for (const auto& c : p.compute_ceilings) {
            y.add(c.value);
        }
        for (const auto& b : p.bandwidth_ceilings) {
            y.add(b.value * x_min);
        }
    }
    for (const auto& t : trials) {
        y.add(t.achieved_gflops);
    }
    return y;
}

std::string pair_label(const std::string& compute, const std::string& bandwidth) {
    return compute + " × " + bandwidth;
}

bool in_domain(double x, double y, const ChartDomain& d) {
    return x >= d.x_min && x <= d.x_max && y >= d.y_min && y <= d.y_max;
}

// Slope-1 line y = B*x restricted to [x_from, x_to] and the domain box.
std::optional<Segment> bandwidth_segment(const Ceiling& b, double x_from, double x_to,
                                         const ChartDomain& d) {
    const double lo = std::max({x_from, d.x_min, d.y_min / b.value});
    const double hi = std::min({x_to, d.x_max, d.y_max / b.value});
    if (lo > hi) {
        return std::nullopt;
    }
    const double lb = std::log2(b.value);
    Segment s;
    s.ceiling_name = b.name;
    s.kind = SegmentKind::bandwidth;
    s.value = b.value;
    s.p0 = {std::log2(lo), lb + std::log2(lo)};
    s.p1 = {std::log2(hi), lb + std::log2(hi)};
    return s;
}

std::optional<Segment> compute_segment(const Ceiling& c, double x_from, double x_to,
                                       const ChartDomain& d) {
    if (c.value < d.y_min || c.value > d.y_max) {
        return std::nullopt;
    }
    const double lo = std::max(x_from, d.x_min);
    const double hi = std::min(x_to, d.x_max);
    if (lo > hi) {
        return std::nullopt;
    }
    const double lp = std::log2(c.value);
    Segment s;
    s.ceiling_name = c.name;
    s.kind = SegmentKind::compute;
    s.value = c.value;
    s.p0 = {std::log2(lo), lp};
    s.p1 = {std::log2(hi), lp};
    return s;
}

void check_domain(const ChartDomain& d) {
    require_positive(d.x_min, "x_min");
    require_positive(d.x_max, "x_max");
    require_positive(d.y_min, "y_min");
    require_positive(d.y_max, "y_max");
    if (!(d.x_min < d.x_max) || !(d.y_min < d.y_max)) {
        throw DomainError("chart domain requires min < max on both axes");
    }
}

} // namespace

std::string_view to_string(SegmentKind kind) {
    switch (kind) {
    case SegmentKind::compute:
        return "compute";
    case SegmentKind::bandwidth:
        return "bandwidth";
    case SegmentKind::envelope:
        return "envelope";
    }
    return "unknown";
}

std::string_view to_string(PointKind kind) {
    switch (kind) {
    case PointKind::intersection:
        return "intersection";
    case PointKind::kernel:
        return "kernel";
    case PointKind::envelope_corner:
        return "envelope_corner";
    }
    return "unknown";
}

ChartDomain default_domain(std::span<const MachineProfile> profiles,
                           std::span<const KernelTrial> trials) {
    if (profiles.empty()) {
        throw ValidationError("profiles", "at least one machine profile required");
    }
    Range x;
    for (const auto& p : profiles) {
        for (const auto& c : p.compute_ceilings) {
            for (const auto& b : p.bandwidth_ceilings) {
                x.add(ridge_point(c.value, b.value));
            }
        }
    }
    for (const auto& t : trials) {
        x.add(t.arithmetic_intensity);
    }

    ChartDomain d;
    if (x.empty()) {
        d.x_min = std::ldexp(1.0, kFallbackXMinExp);
        d.x_max = std::ldexp(1.0, kFallbackXMaxExp);
    } else {
        std::tie(d.x_min, d.x_max) = widen(x);
    }

    const Range y = y_values(profiles, trials, d.x_min);
    if (y.empty()) {
        throw ValidationError("profiles", "no values constrain the y axis");
    }
    std::tie(d.y_min, d.y_max) = widen(y);
    return d;
}

ChartDomain domain_with_x(std::span<const MachineProfile> profiles,
                          std::span<const KernelTrial> trials, double x_min, double x_max) {
    require_positive(x_min, "x_min");
    require_positive(x_max, "x_max");
    if (!(x_min < x_max)) {
        throw DomainError("x_min must be < x_max");
    }
    if (profiles.empty()) {
        throw ValidationError("profiles", "at least one machine profile required");
    }
    const Range y = y_values(profiles, trials, x_min);
    ChartDomain d;
    d.x_min = x_min;
    d.x_max = x_max;
    std::tie(d.y_min, d.y_max) = widen(y);
    return d;
}

std::vector<Segment> build_segments(const MachineProfile& profile, const ChartDomain& domain) {
    validate(profile);
    check_domain(domain);

    const Ceiling& p_top = profile.top_compute();
    const Ceiling& b_top = profile.top_bandwidth();
    const double top_ridge = p_top.value / b_top.value;

    std::vector<Segment> out;
    for (const auto& b : profile.bandwidth_ceilings) {
        if (auto s = bandwidth_segment(b, domain.x_min, p_top.value / b.value, domain)) {
            s->is_top = &b == &b_top;
            out.push_back(std::move(*s));
        }
    }
    for (const auto& c : profile.compute_ceilings) {
        if (auto s = compute_segment(c, c.value / b_top.value, domain.x_max, domain)) {
            s->is_top = &c == &p_top;
            out.push_back(std::move(*s));
        }
    }
    if (auto s = bandwidth_segment(b_top, domain.x_min, top_ridge, domain)) {
        s->kind = SegmentKind::envelope;
        s->is_top = true;
        out.push_back(std::move(*s));
    }
    if (auto s = compute_segment(p_top, top_ridge, domain.x_max, domain)) {
        s->kind = SegmentKind::envelope;
        s->is_top = true;
        out.push_back(std::move(*s));
    }
    return out;
}

std::vector<MarkedPoint> intersection_points(const MachineProfile& profile, const ChartDomain& domain) {
    validate(profile);
    check_domain(domain);

    std::vector<MarkedPoint> out;
    for (const auto& c : profile.compute_ceilings) {
        for (const auto& b : profile.bandwidth_ceilings) {
            const double x = ridge_point(c.value, b.value);
            if (!in_domain(x, c.value, domain)) {
                continue;
            }
            MarkedPoint p;
            p.x = x;
            p.y = c.value;
            p.label = pair_label(c.name, b.name);
            p.kind = PointKind::intersection;
            p.pair = {c.name, b.name};
            out.push_back(std::move(p));
        }
    }

    const Ceiling& p_top = profile.top_compute();
    const Ceiling& b_top = profile.top_bandwidth();
    const double x = ridge_point(p_top.value, b_top.value);
    if (in_domain(x, p_top.value, domain)) {
        MarkedPoint p;
        p.x = x;
        p.y = p_top.value;
        p.label = pair_label(p_top.name, b_top.name);
        p.kind = PointKind::envelope_corner;
        p.pair = {p_top.name, b_top.name};
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<MarkedPoint> kernel_markers(std::span<const KernelTrial> trials) {
    std::vector<MarkedPoint> out;
    out.reserve(trials.size());
    for (const auto& t : trials) {
        MarkedPoint p;
        p.x = t.arithmetic_intensity;
        p.y = t.achieved_gflops;
        p.label = t.name;
        p.kind = PointKind::kernel;
        p.kernel = t.name;
        out.push_back(std::move(p));
    }
    return out;
}

double log2_map(double value, double lo, double hi, double extent) {
    require_positive(value, "value");
    require_positive(lo, "lower bound");
    require_positive(hi, "upper bound");
    if (!(lo < hi)) {
        throw DomainError("log2_map requires lo < hi");
    }
    return extent * std::log2(value / lo) / std::log2(hi / lo);
}

std::vector<int> power_of_two_ticks(double lo, double hi) {
    require_positive(lo, "lower bound");
    require_positive(hi, "upper bound");
    std::vector<int> out;
    for (int n = ceil_log2(lo); n <= floor_log2(hi); ++n) {
        out.push_back(n);
    }
    return out;
}

std::string tick_label(int exponent) {
    if (exponent >= 10) {
        return "2^" + std::to_string(exponent);
    }
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::ldexp(1.0, exponent),
                                   std::chars_format::fixed);
    return std::string(buf.data(), end);
}

ChartGeometry build_geometry(const MachineProfile& profile, std::span<const KernelTrial> trials,
                             const ChartDomain& domain, std::string dataset_id) {
    ChartGeometry g;
    g.domain = domain;
    g.segments = build_segments(profile, domain);
    g.points = intersection_points(profile, domain);
    for (auto& k : kernel_markers(trials)) {
        if (in_domain(k.x, k.y, domain)) {
            g.points.push_back(std::move(k));
        }
    }
    g.x_ticks = power_of_two_ticks(domain.x_min, domain.x_max);
    g.y_ticks = power_of_two_ticks(domain.y_min, domain.y_max);
    g.dataset_id = std::move(dataset_id);
    return g;
}

} // namespace roofline
