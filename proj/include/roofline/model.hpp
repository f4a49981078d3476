#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace roofline {

using Metadata = std::map<std::string, std::string>;

enum class CeilingKind { compute, bandwidth };

std::string_view to_string(CeilingKind kind);

// One benchmarked upper bound. value is GFLOP/s for compute ceilings and
// GB/s for bandwidth ceilings.
struct Ceiling {
    std::string name;
    CeilingKind kind = CeilingKind::compute;
    double value = 0.0;

    friend bool operator==(const Ceiling&, const Ceiling&) = default;
};

struct KernelTrial {
    std::string name;
    double arithmetic_intensity = 0.0;  // FLOPs/Byte
    double achieved_gflops = 0.0;
    Metadata metadata;

    friend bool operator==(const KernelTrial&, const KernelTrial&) = default;
};

struct MachineProfile {
    std::string name;
    std::vector<Ceiling> compute_ceilings;
    std::vector<Ceiling> bandwidth_ceilings;
    Metadata metadata;

    friend bool operator==(const MachineProfile&, const MachineProfile&) = default;

    // First ceiling holding the maximum value, in declaration order.
    const Ceiling& top_compute() const;
    const Ceiling& top_bandwidth() const;
};

enum class BoundClass { memory_bound, compute_bound, at_ridge };

std::string_view to_string(BoundClass c);

struct CeilingPair {
    std::string compute;
    std::string bandwidth;

    friend bool operator==(const CeilingPair&, const CeilingPair&) = default;
};

struct BoundAnalysis {
    CeilingPair ceiling_pair;
    double ridge_point = 0.0;
    double attainable_gflops = 0.0;
    BoundClass classification = BoundClass::memory_bound;
    // achieved / attainable; not clamped, may exceed 1.
    double efficiency = 0.0;
};

struct KernelAnalysis {
    std::vector<BoundAnalysis> pairs;  // compute-major, declaration order
    BoundAnalysis top;                 // max compute x max bandwidth
};

struct WhatIf {
    double old_bound = 0.0;
    double new_bound = 0.0;
    double bound_ratio = 0.0;
};

// Relative tolerance for classifying an intensity as sitting on the ridge.
inline constexpr double kRidgeTolerance = 1e-12;

// Throw ValidationError on the first broken invariant. path_prefix is
// prepended to the reported location so callers can map it to JSON paths.
void validate(const Ceiling& c, const std::string& path_prefix = "ceiling");
void validate(const KernelTrial& t, const std::string& path_prefix = "kernel");
void validate(const MachineProfile& m, const std::string& path_prefix = "machine");

// min(compute, bandwidth * intensity). Throws DomainError on non-positive or
// non-finite input.
double attainable(double compute_gflops, double bandwidth_gbs, double intensity);

double ridge_point(double compute_gflops, double bandwidth_gbs);

BoundClass classify(double intensity, double ridge);

BoundAnalysis analyze_pair(const KernelTrial& trial, const Ceiling& compute, const Ceiling& bandwidth);

KernelAnalysis analyze_kernel(const KernelTrial& trial, const MachineProfile& profile);

WhatIf what_if(const KernelTrial& trial, double new_intensity, double compute_gflops,
               double bandwidth_gbs);

} // namespace roofline
