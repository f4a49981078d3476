#pragma once

#include "roofline/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roofline {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr std::string_view kDatasetExtension = ".roofline.json";

// One machine characterization plus the kernel trials measured on it.
//
// On disk:
//   {"schema_version":"1.0",
//    "machine":{"name":..., "metadata":{...},
//               "gflops":[{"name":...,"value":...}...],
//               "gbytes":[{"name":...,"value":...}...]},
//    "kernels":[{"name":...,"ai":...,"gflops":...,"metadata":{...}}...],
//    "provenance":{"created":"<ISO-8601 UTC>","source":...,...}}
//
// Unknown top-level keys are kept in `extra` and written back verbatim.
struct Dataset {
    std::string schema_version{kSchemaVersion};
    MachineProfile machine;
    std::vector<KernelTrial> trials;
    Metadata provenance;
    nlohmann::json extra = nlohmann::json::object();
    // Derived; recomputed by load_dataset and never read from input.
    std::string fingerprint;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Parses, validates and fingerprints. Throws ParseError (with byte offset),
// ValidationError (with JSON path) or VersionError.
Dataset load_dataset(std::string_view bytes);

// Canonical JSON: sorted keys, no whitespace, shortest round-trip numbers.
std::string save_dataset(const Dataset& d);

// SHA-256 over the canonical {name, gflops, gbytes} of the machine only.
std::string fingerprint(const Dataset& d);

std::string sha256_hex(std::string_view bytes);

// Serializes with sorted keys and no insignificant whitespace.
std::string canonical_json(const nlohmann::json& j);

struct StoredDataset {
    std::string id;
    Dataset dataset;
};

std::vector<std::string> find_duplicates(const Dataset& incoming, std::span<const StoredDataset> store);

using MetadataQuery = std::vector<std::pair<std::string, std::string>>;

// Conjunction of exact (key, value) matches against machine metadata or
// provenance, plus a case-insensitive machine-name substring.
std::vector<std::string> search(std::span<const StoredDataset> store, const MetadataQuery& query,
                                const std::optional<std::string>& name_substring);

std::string read_file(const std::filesystem::path& path);

// Writes to a unique temp name in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace roofline
