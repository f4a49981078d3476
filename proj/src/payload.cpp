#include "roofline/payload.hpp"

namespace roofline {

using nlohmann::json;

json to_json(const ChartGeometry& g) {
    json segments = json::array();
    for (const auto& s : g.segments) {
        segments.push_back({{"ceiling_name", s.ceiling_name},
                            {"kind", to_string(s.kind)},
                            {"value", s.value},
                            {"p0", {s.p0.lx, s.p0.ly}},
                            {"p1", {s.p1.lx, s.p1.ly}},
                            {"is_top", s.is_top}});
    }
    json points = json::array();
    for (const auto& p : g.points) {
        json source = p.kind == PointKind::kernel
                          ? json{{"kernel", p.kernel}}
                          : json{{"compute", p.pair.compute}, {"bandwidth", p.pair.bandwidth}};
        points.push_back({{"x", p.x},
                          {"y", p.y},
                          {"label", p.label},
                          {"kind", to_string(p.kind)},
                          {"source", std::move(source)}});
    }
    return {{"dataset_id", g.dataset_id},
            {"domain",
             {{"x_min", g.domain.x_min},
              {"x_max", g.domain.x_max},
              {"y_min", g.domain.y_min},
              {"y_max", g.domain.y_max}}},
            {"segments", std::move(segments)},
            {"points", std::move(points)},
            {"x_ticks", g.x_ticks},
            {"y_ticks", g.y_ticks}};
}

json to_json(const BoundAnalysis& a, bool is_top) {
    return {{"ceiling_pair", {{"compute", a.ceiling_pair.compute}, {"bandwidth", a.ceiling_pair.bandwidth}}},
            {"ridge_point", a.ridge_point},
            {"attainable_gflops", a.attainable_gflops},
            {"classification", to_string(a.classification)},
            {"efficiency", a.efficiency},
            {"is_top", is_top}};
}

json to_json(const KernelAnalysis& a) {
    json out = json::array();
    for (const auto& p : a.pairs) {
        out.push_back(to_json(p, false));
    }
    out.push_back(to_json(a.top, true));
    return out;
}

json to_json(const RepositoryEntry& e) {
    return {{"id", e.id},
            {"url", e.url},
            {"sha256", e.sha256},
            {"machine_name", e.machine_name},
            {"created", e.created},
            {"tags", e.tags}};
}

json to_json(const SyncReport& r) {
    json errors = json::array();
    for (const auto& e : r.errors) {
        errors.push_back({{"id", e.id}, {"message", e.message}});
    }
    return {{"pulled", r.pulled}, {"cached", r.cached}, {"errors", std::move(errors)}};
}

json summary_json(const StoredDataset& s) {
    auto created = s.dataset.provenance.find("created");
    return {{"id", s.id},
            {"machine_name", s.dataset.machine.name},
            {"created", created == s.dataset.provenance.end() ? "" : created->second},
            {"n_trials", s.dataset.trials.size()},
            {"fingerprint", s.dataset.fingerprint}};
}

json error_envelope(std::string_view code, std::string_view message) {
    return {{"error", {{"code", code}, {"message", message}}}};
}

} // namespace roofline
