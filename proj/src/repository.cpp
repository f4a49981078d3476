#include "roofline/repository.hpp"

#include "roofline/dataset.hpp"
#include "roofline/errors.hpp"
#include "roofline/store.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>

namespace roofline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_sha256_hex(std::string_view s) {
    return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
           });
}

std::string lower_hex(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw FormatError(where + "." + key + ": required string");
    }
    return it->get<std::string>();
}

} // namespace

const RepositoryEntry* RepositoryIndex::find(std::string_view id) const {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.id == id; });
    return it == entries.end() ? nullptr : &*it;
}

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(std::string_view text) {
    Url u;
    const auto sep = text.find("://");
    if (sep == std::string_view::npos) {
        throw FormatError("not an absolute URL: " + std::string(text));
    }
    u.scheme = std::string(text.substr(0, sep));
    std::transform(u.scheme.begin(), u.scheme.end(), u.scheme.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (u.scheme != "http" && u.scheme != "https") {
        throw FormatError("unsupported URL scheme: " + u.scheme);
    }
    const std::string rest(text.substr(sep + 3));
    const auto slash = rest.find('/');
    std::string_view authority = std::string_view(rest).substr(0, slash);
    u.path = slash == std::string_view::npos ? "/" : rest.substr(slash);
    if (authority.empty() || authority.find('@') != std::string_view::npos) {
        throw FormatError("bad URL authority: " + std::string(text));
    }
    u.port = u.scheme == "https" ? 443 : 80;
    std::string_view host = authority;
    if (authority.front() == '[') {
        const auto close = authority.find(']');
        if (close == std::string_view::npos) {
            throw FormatError("bad IPv6 literal: " + std::string(text));
        }
        host = authority.substr(1, close - 1);
        authority.remove_prefix(close + 1);
        if (!authority.empty() && authority.front() != ':') {
            throw FormatError("bad URL authority: " + std::string(text));
        }
    } else if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        host = authority.substr(0, colon);
        authority.remove_prefix(colon);
    } else {
        authority = {};
    }
    if (!authority.empty()) {
        const std::string port_text(authority.substr(1));
        char* end = nullptr;
        const long port = std::strtol(port_text.c_str(), &end, 10);
        if (port_text.empty() || *end != '\0' || port < 1 || port > 65535) {
            throw FormatError("bad URL port: " + std::string(text));
        }
        u.port = static_cast<int>(port);
    }
    if (host.empty()) {
        throw FormatError("missing URL host: " + std::string(text));
    }
    u.host = std::string(host);
    return u;
}

RepositoryIndex parse_index(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed index: ") + e.what());
    }
    if (!root.is_object()) {
        throw FormatError("index: must be an object");
    }
    RepositoryIndex index;
    index.repo_version = string_field(root, "repo_version", "index");
    if (index.repo_version != kRepoVersion) {
        throw FormatError("index.repo_version: unsupported \"" + index.repo_version + "\"");
    }
    auto entries = root.find("entries");
    if (entries == root.end() || !entries->is_array()) {
        throw FormatError("index.entries: required array");
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < entries->size(); ++i) {
        const std::string where = "index.entries[" + std::to_string(i) + "]";
        const json& e = (*entries)[i];
        if (!e.is_object()) {
            throw FormatError(where + ": must be an object");
        }
        RepositoryEntry entry;
        entry.id = string_field(e, "id", where);
        entry.url = string_field(e, "url", where);
        entry.sha256 = string_field(e, "sha256", where);
        entry.machine_name = string_field(e, "machine_name", where);
        entry.created = string_field(e, "created", where);
        if (!is_valid_dataset_id(entry.id)) {
            throw FormatError(where + ".id: \"" + entry.id + "\" is not a valid dataset id");
        }
        if (!ids.insert(entry.id).second) {
            throw FormatError(where + ".id: duplicate id \"" + entry.id + "\"");
        }
        if (!is_sha256_hex(entry.sha256)) {
            throw FormatError(where + ".sha256: not a 64-digit hex digest");
        }
        entry.sha256 = lower_hex(entry.sha256);
        parse_url(entry.url);
        if (auto tags = e.find("tags"); tags != e.end()) {
            if (!tags->is_array()) {
                throw FormatError(where + ".tags: must be an array");
            }
            for (const auto& t : *tags) {
                if (!t.is_string()) {
                    throw FormatError(where + ".tags: entries must be strings");
                }
                entry.tags.push_back(t.get<std::string>());
            }
        }
        index.entries.push_back(std::move(entry));
    }
    return index;
}

std::vector<RepositoryEntry> list_remote(const RepositoryIndex& index,
                                         const std::optional<std::string>& tag_filter) {
    std::vector<RepositoryEntry> out;
    for (const auto& e : index.entries) {
        if (!tag_filter || std::find(e.tags.begin(), e.tags.end(), *tag_filter) != e.tags.end()) {
            out.push_back(e);
        }
    }
    return out;
}

fs::path default_cache_dir() {
    if (const char* dir = std::getenv("ROOFLINE_CACHE_DIR"); dir && *dir) {
        return dir;
    }
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return fs::path(xdg) / "roofline";
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return fs::path(home) / ".cache" / "roofline";
    }
    return fs::temp_directory_path() / "roofline-cache";
}

RepositoryClient::RepositoryClient(std::chrono::milliseconds timeout) : timeout_(timeout) {}

std::string RepositoryClient::http_get(const std::string& url) {
    const Url u = parse_url(url);
    if (u.scheme != "http") {
        throw TransportError("only plain http repositories are supported: " + url);
    }
    httplib::Client client(u.host, u.port);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);

    ++transfers_;
    auto res = client.Get(u.path);
    if (!res) {
        throw TransportError("GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw RemoteError(res->status, "GET " + url);
    }
    return std::move(res->body);
}

RepositoryIndex RepositoryClient::fetch_index(const std::string& base_url) {
    std::string base = base_url;
    while (!base.empty() && base.back() == '/') {
        base.pop_back();
    }
    parse_url(base);
    return parse_index(http_get(base + "/index.json"));
}

PullResult RepositoryClient::pull_entry(const RepositoryIndex& index, const std::string& id,
                                        const fs::path& cache_dir) {
    const RepositoryEntry* entry = index.find(id);
    if (!entry) {
        throw NotFoundError("no repository entry with id \"" + id + "\"");
    }
    std::error_code ec;
    fs::create_directories(cache_dir, ec);
    const fs::path target = cache_dir / (entry->id + std::string(kDatasetExtension));

    if (fs::is_regular_file(target)) {
        try {
            if (sha256_hex(read_file(target)) == entry->sha256) {
                return {target, true};
            }
        } catch (const Error&) {
            // unreadable cache file; fall through and re-download
        }
    }

    const std::string bytes = http_get(entry->url);
    const std::string actual = sha256_hex(bytes);
    if (actual != entry->sha256) {
        throw IntegrityError("checksum mismatch for \"" + id + "\": index says " + entry->sha256 +
                             ", downloaded " + actual);
    }
    try {
        load_dataset(bytes);
    } catch (const Error& e) {
        throw IntegrityError("entry \"" + id + "\" is not a valid dataset: " + e.what());
    }
    write_file_atomic(target, bytes);
    return {target, false};
}

fs::path RepositoryClient::pull(const RepositoryIndex& index, const std::string& id,
                                const fs::path& cache_dir) {
    return pull_entry(index, id, cache_dir).path;
}

SyncReport RepositoryClient::sync(const std::string& base_url, const fs::path& cache_dir) {
    const RepositoryIndex index = fetch_index(base_url);
    SyncReport report;
    for (const auto& e : index.entries) {
        try {
            const PullResult r = pull_entry(index, e.id, cache_dir);
            (r.from_cache ? report.cached : report.pulled).push_back(e.id);
        } catch (const Error& err) {
            report.errors.push_back({e.id, err.what()});
        }
    }
    return report;
}

} // namespace roofline
