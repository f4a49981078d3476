#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roofline {

inline constexpr std::string_view kRepoVersion = "1.0";

struct RepositoryEntry {
    std::string id;
    std::string url;
    std::string sha256;
    std::string machine_name;
    std::string created;
    std::vector<std::string> tags;

    friend bool operator==(const RepositoryEntry&, const RepositoryEntry&) = default;
};

struct RepositoryIndex {
    std::string repo_version{kRepoVersion};
    std::vector<RepositoryEntry> entries;

    const RepositoryEntry* find(std::string_view id) const;
};

struct Url {
    std::string scheme;  // "http" or "https"
    std::string host;
    int port = 0;
    std::string path;    // always starts with '/'

    std::string origin() const;
};

// Throws FormatError on anything that is not an absolute http(s) URL.
Url parse_url(std::string_view text);

// Throws FormatError on malformed JSON, missing fields, duplicate ids,
// ids unusable as cache file names, or bad sha256 hex.
RepositoryIndex parse_index(std::string_view bytes);

std::vector<RepositoryEntry> list_remote(const RepositoryIndex& index,
                                         const std::optional<std::string>& tag_filter);

// $ROOFLINE_CACHE_DIR, else $XDG_CACHE_HOME/roofline, else ~/.cache/roofline.
std::filesystem::path default_cache_dir();

struct PullResult {
    std::filesystem::path path;
    bool from_cache = false;
};

struct SyncError {
    std::string id;
    std::string message;
};

struct SyncReport {
    std::vector<std::string> pulled;
    std::vector<std::string> cached;
    std::vector<SyncError> errors;
};

class RepositoryClient {
public:
    explicit RepositoryClient(std::chrono::milliseconds timeout = std::chrono::seconds(10));

    // GET <base_url>/index.json.
    RepositoryIndex fetch_index(const std::string& base_url);

    // Installs cache_dir/<id>.roofline.json unless a file with the indexed
    // sha256 is already there. Downloads are hash-checked and must load as
    // a dataset before they are renamed into place.
    std::filesystem::path pull(const RepositoryIndex& index, const std::string& id,
                               const std::filesystem::path& cache_dir);

    PullResult pull_entry(const RepositoryIndex& index, const std::string& id,
                          const std::filesystem::path& cache_dir);

    // fetch_index, then pull every entry. Per-entry failures are collected;
    // index failures propagate.
    SyncReport sync(const std::string& base_url, const std::filesystem::path& cache_dir);

    // Number of HTTP requests issued by this client.
    std::size_t transfers() const noexcept { return transfers_.load(); }

private:
    std::string http_get(const std::string& url);

    std::chrono::milliseconds timeout_;
    std::atomic<std::size_t> transfers_{0};
};

} // namespace roofline
