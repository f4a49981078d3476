#include "roofline/dataset.hpp"

#include "roofline/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace roofline {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys{"schema_version", "machine", "kernels", "provenance"};
const std::set<std::string> kMachineKeys{"name", "metadata", "gflops", "gbytes"};
const std::set<std::string> kCeilingKeys{"name", "value"};
const std::set<std::string> kKernelKeys{"name", "ai", "gflops", "metadata"};

std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(path.empty() ? key : path + "." + key, "required");
    }
    return *it;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key)) {
            throw ValidationError(path + "." + key, "unknown key");
        }
    }
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw ValidationError(path, "must be a string");
    }
    return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ValidationError(path, "must be a number");
    }
    return j.get<double>();
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ValidationError(path, "must be an object");
    }
    return j;
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw ValidationError(path, "must be an array");
    }
    return j;
}

Metadata parse_metadata(const json& j, const std::string& path) {
    Metadata out;
    for (const auto& [key, value] : as_object(j, path).items()) {
        out.emplace(key, as_string(value, path + "." + key));
    }
    return out;
}

std::vector<Ceiling> parse_ceilings(const json& j, CeilingKind kind, const std::string& path) {
    std::vector<Ceiling> out;
    const json& arr = as_array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = index_path(path, i);
        const json& c = as_object(arr[i], at);
        reject_unknown_keys(c, kCeilingKeys, at);
        out.push_back({as_string(require(c, "name", at), at + ".name"), kind,
                       as_number(require(c, "value", at), at + ".value")});
    }
    return out;
}

MachineProfile parse_machine(const json& j) {
    const std::string path = "machine";
    as_object(j, path);
    reject_unknown_keys(j, kMachineKeys, path);
    MachineProfile m;
    m.name = as_string(require(j, "name", path), "machine.name");
    m.compute_ceilings = parse_ceilings(require(j, "gflops", path), CeilingKind::compute, "machine.gflops");
    m.bandwidth_ceilings =
        parse_ceilings(require(j, "gbytes", path), CeilingKind::bandwidth, "machine.gbytes");
    if (auto it = j.find("metadata"); it != j.end()) {
        m.metadata = parse_metadata(*it, "machine.metadata");
    }
    validate(m, path);
    return m;
}

std::vector<KernelTrial> parse_kernels(const json& j) {
    std::vector<KernelTrial> out;
    const json& arr = as_array(j, "kernels");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = index_path("kernels", i);
        const json& k = as_object(arr[i], at);
        reject_unknown_keys(k, kKernelKeys, at);
        KernelTrial t;
        t.name = as_string(require(k, "name", at), at + ".name");
        t.arithmetic_intensity = as_number(require(k, "ai", at), at + ".ai");
        t.achieved_gflops = as_number(require(k, "gflops", at), at + ".gflops");
        if (auto it = k.find("metadata"); it != k.end()) {
            t.metadata = parse_metadata(*it, at + ".metadata");
        }
        validate(t, at);
        out.push_back(std::move(t));
    }
    return out;
}

Metadata parse_provenance(const json& j) {
    Metadata p = parse_metadata(j, "provenance");
    static const std::regex iso_utc(R"(^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z$)");
    auto created = p.find("created");
    if (created == p.end()) {
        throw ValidationError("provenance.created", "required");
    }
    if (!std::regex_match(created->second, iso_utc)) {
        throw ValidationError("provenance.created", "must be an ISO-8601 UTC timestamp");
    }
    if (!p.contains("source")) {
        throw ValidationError("provenance.source", "required");
    }
    return p;
}

json ceilings_json(const std::vector<Ceiling>& ceilings) {
    json arr = json::array();
    for (const auto& c : ceilings) {
        arr.push_back({{"name", c.name}, {"value", c.value}});
    }
    return arr;
}

json metadata_json(const Metadata& m) {
    json obj = json::object();
    for (const auto& [k, v] : m) {
        obj[k] = v;
    }
    return obj;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

std::string canonical_json(const json& j) {
    // nlohmann's default object type is an ordered std::map, and dump()
    // without indent emits no whitespace and shortest round-trip doubles.
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

Dataset load_dataset(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
    if (!root.is_object()) {
        throw ValidationError("(root)", "must be an object");
    }

    if (auto it = root.find("schema_version"); it != root.end()) {
        if (!it->is_string() || it->get<std::string>() != kSchemaVersion) {
            throw VersionError("unsupported schema_version " + it->dump() + " (expected \"" +
                               std::string(kSchemaVersion) + "\")");
        }
    }

    Dataset d;
    d.machine = parse_machine(require(root, "machine", ""));
    if (auto it = root.find("kernels"); it != root.end()) {
        d.trials = parse_kernels(*it);
    }
    d.provenance = parse_provenance(require(root, "provenance", ""));
    d.schema_version = as_string(require(root, "schema_version", ""), "schema_version");

    for (const auto& [key, value] : root.items()) {
        if (!kTopLevelKeys.contains(key)) {
            d.extra[key] = value;
        }
    }
    d.fingerprint = fingerprint(d);
    return d;
}

std::string save_dataset(const Dataset& d) {
    json root = d.extra.is_object() ? d.extra : json::object();
    root["schema_version"] = d.schema_version;

    json machine;
    machine["name"] = d.machine.name;
    machine["metadata"] = metadata_json(d.machine.metadata);
    machine["gflops"] = ceilings_json(d.machine.compute_ceilings);
    machine["gbytes"] = ceilings_json(d.machine.bandwidth_ceilings);
    root["machine"] = std::move(machine);

    json kernels = json::array();
    for (const auto& t : d.trials) {
        kernels.push_back({{"name", t.name},
                           {"ai", t.arithmetic_intensity},
                           {"gflops", t.achieved_gflops},
                           {"metadata", metadata_json(t.metadata)}});
    }
    root["kernels"] = std::move(kernels);
    root["provenance"] = metadata_json(d.provenance);
    return canonical_json(root);
}

std::string fingerprint(const Dataset& d) {
    json scope;
    scope["name"] = d.machine.name;
    scope["gflops"] = ceilings_json(d.machine.compute_ceilings);
    scope["gbytes"] = ceilings_json(d.machine.bandwidth_ceilings);
    return sha256_hex(canonical_json(scope));
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::vector<std::string> find_duplicates(const Dataset& incoming, std::span<const StoredDataset> store) {
    const std::string fp = incoming.fingerprint.empty() ? fingerprint(incoming) : incoming.fingerprint;
    std::vector<std::string> out;
    for (const auto& s : store) {
        const std::string other = s.dataset.fingerprint.empty() ? fingerprint(s.dataset) : s.dataset.fingerprint;
        if (other == fp) {
            out.push_back(s.id);
        }
    }
    return out;
}

std::vector<std::string> search(std::span<const StoredDataset> store, const MetadataQuery& query,
                                const std::optional<std::string>& name_substring) {
    const std::string needle = name_substring ? lowercase(*name_substring) : std::string{};
    auto matches = [](const Metadata& m, const std::string& key, const std::string& value) {
        auto it = m.find(key);
        return it != m.end() && it->second == value;
    };

    std::vector<std::string> out;
    for (const auto& s : store) {
        const Dataset& d = s.dataset;
        const bool meta_ok = std::all_of(query.begin(), query.end(), [&](const auto& kv) {
            return matches(d.machine.metadata, kv.first, kv.second) ||
                   matches(d.provenance, kv.first, kv.second);
        });
        if (meta_ok && lowercase(d.machine.name).find(needle) != std::string::npos) {
            out.push_back(s.id);
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error("error reading " + path.string());
    }
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    static std::atomic<unsigned long> counter{0};
    std::ostringstream tmp_name;
    tmp_name << "." << path.filename().string() << ".tmp." << ::getpid() << "."
             << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
    const auto tmp = path.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("error writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot install " + path.string() + ": " + ec.message());
    }
}

} // namespace roofline
