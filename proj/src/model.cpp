#include "roofline/model.hpp"

#include "roofline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace roofline {

namespace {

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

const Ceiling& first_max(const std::vector<Ceiling>& ceilings) {
    if (ceilings.empty()) {
        throw ValidationError("machine", "no ceilings of the requested kind");
    }
    auto it = ceilings.begin();
    for (auto c = ceilings.begin(); c != ceilings.end(); ++c) {
        if (c->value > it->value) {
            it = c;
        }
    }
    return *it;
}

void validate_ceilings(const std::vector<Ceiling>& ceilings, CeilingKind kind,
                       const std::string& path) {
    if (ceilings.empty()) {
        throw ValidationError(path, "at least one ceiling required");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < ceilings.size(); ++i) {
        const std::string at = path + "[" + std::to_string(i) + "]";
        validate(ceilings[i], at);
        if (ceilings[i].kind != kind) {
            throw ValidationError(at, "expected a " + std::string(to_string(kind)) + " ceiling");
        }
        if (!seen.insert(ceilings[i].name).second) {
            throw ValidationError(at + ".name", "duplicate ceiling name \"" + ceilings[i].name + "\"");
        }
    }
}

} // namespace

std::string_view to_string(CeilingKind kind) {
    return kind == CeilingKind::compute ? "compute" : "bandwidth";
}

std::string_view to_string(BoundClass c) {
    switch (c) {
    case BoundClass::memory_bound:
        return "memory_bound";
    case BoundClass::compute_bound:
        return "compute_bound";
    case BoundClass::at_ridge:
        return "at_ridge";
    }
    return "unknown";
}

const Ceiling& MachineProfile::top_compute() const { return first_max(compute_ceilings); }
const Ceiling& MachineProfile::top_bandwidth() const { return first_max(bandwidth_ceilings); }

void validate(const Ceiling& c, const std::string& path_prefix) {
    if (c.name.empty()) {
        throw ValidationError(path_prefix + ".name", "must be non-empty");
    }
    if (!std::isfinite(c.value) || c.value <= 0.0) {
        throw ValidationError(path_prefix + ".value", "must be > 0 and finite");
    }
}

void validate(const KernelTrial& t, const std::string& path_prefix) {
    if (t.name.empty()) {
        throw ValidationError(path_prefix + ".name", "must be non-empty");
    }
    if (!std::isfinite(t.arithmetic_intensity) || t.arithmetic_intensity <= 0.0) {
        throw ValidationError(path_prefix + ".ai", "must be > 0 and finite");
    }
    if (!std::isfinite(t.achieved_gflops) || t.achieved_gflops <= 0.0) {
        throw ValidationError(path_prefix + ".gflops", "must be > 0 and finite");
    }
}

void validate(const MachineProfile& m, const std::string& path_prefix) {
    if (m.name.empty()) {
        throw ValidationError(path_prefix + ".name", "must be non-empty");
    }
    validate_ceilings(m.compute_ceilings, CeilingKind::compute, path_prefix + ".gflops");
    validate_ceilings(m.bandwidth_ceilings, CeilingKind::bandwidth, path_prefix + ".gbytes");
}

double attainable(double compute_gflops, double bandwidth_gbs, double intensity) {
    require_positive(compute_gflops, "compute ceiling");
    require_positive(bandwidth_gbs, "bandwidth ceiling");
    require_positive(intensity, "arithmetic intensity");
    // The roof is flat from the computed ridge onward, so the corner lands
    // on the compute ceiling exactly even when B * (P / B) rounds below P.
    if (intensity >= compute_gflops / bandwidth_gbs) {
        return compute_gflops;
    }
    return std::min(compute_gflops, bandwidth_gbs * intensity);
}

double ridge_point(double compute_gflops, double bandwidth_gbs) {
    require_positive(compute_gflops, "compute ceiling");
    require_positive(bandwidth_gbs, "bandwidth ceiling");
    return compute_gflops / bandwidth_gbs;
}

BoundClass classify(double intensity, double ridge) {
    if (std::abs(intensity - ridge) <= kRidgeTolerance * ridge) {
        return BoundClass::at_ridge;
    }
    return intensity < ridge ? BoundClass::memory_bound : BoundClass::compute_bound;
}

BoundAnalysis analyze_pair(const KernelTrial& trial, const Ceiling& compute, const Ceiling& bandwidth) {
    BoundAnalysis out;
    out.ceiling_pair = {compute.name, bandwidth.name};
    out.ridge_point = ridge_point(compute.value, bandwidth.value);
    out.attainable_gflops = attainable(compute.value, bandwidth.value, trial.arithmetic_intensity);
    out.classification = classify(trial.arithmetic_intensity, out.ridge_point);
    out.efficiency = trial.achieved_gflops / out.attainable_gflops;
    return out;
}

KernelAnalysis analyze_kernel(const KernelTrial& trial, const MachineProfile& profile) {
    validate(trial, "trial");
    validate(profile, "machine");

    KernelAnalysis out;
    out.pairs.reserve(profile.compute_ceilings.size() * profile.bandwidth_ceilings.size());
    for (const auto& c : profile.compute_ceilings) {
        for (const auto& b : profile.bandwidth_ceilings) {
            out.pairs.push_back(analyze_pair(trial, c, b));
        }
    }
    out.top = analyze_pair(trial, profile.top_compute(), profile.top_bandwidth());
    return out;
}

WhatIf what_if(const KernelTrial& trial, double new_intensity, double compute_gflops,
               double bandwidth_gbs) {
    WhatIf out;
    out.old_bound = attainable(compute_gflops, bandwidth_gbs, trial.arithmetic_intensity);
    out.new_bound = attainable(compute_gflops, bandwidth_gbs, new_intensity);
    out.bound_ratio = out.new_bound / out.old_bound;
    return out;
}

} // namespace roofline
