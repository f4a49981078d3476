#pragma once

// JSON shapes shared by the HTTP service and the CLI's --json output.

#include "roofline/dataset.hpp"
#include "roofline/geometry.hpp"
#include "roofline/model.hpp"
#include "roofline/repository.hpp"

#include <json.hpp>

namespace roofline {

nlohmann::json to_json(const ChartGeometry& g);
nlohmann::json to_json(const BoundAnalysis& a, bool is_top);

// Per-pair entries in declaration order, then the top-envelope entry.
nlohmann::json to_json(const KernelAnalysis& a);

nlohmann::json to_json(const RepositoryEntry& e);
nlohmann::json to_json(const SyncReport& r);

// {id, machine_name, created, n_trials, fingerprint}
nlohmann::json summary_json(const StoredDataset& s);

// {"error":{"code":..., "message":...}}
nlohmann::json error_envelope(std::string_view code, std::string_view message);

} // namespace roofline
