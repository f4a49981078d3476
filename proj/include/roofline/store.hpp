#pragma once

#include "roofline/dataset.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace roofline {

// Ids are restricted to [A-Za-z0-9_-]{1,64} so an id can never address a
// path outside the store directory.
bool is_valid_dataset_id(std::string_view id);

// Directory of <id>.roofline.json files. Readers share a lock; writes take
// it exclusively and install files by temp-write + rename.
class DatasetStore {
public:
    explicit DatasetStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    // All loadable datasets ordered by id. Files that fail to load are skipped.
    std::vector<StoredDataset> list() const;

    std::optional<StoredDataset> get(std::string_view id) const;

    struct PutResult {
        std::string id;
        std::vector<std::string> duplicates;
    };

    // Stores under a fresh random 8-hex id. Duplicates are reported, not rejected.
    PutResult put(const Dataset& d);

    std::filesystem::path path_for(std::string_view id) const;

    // Held by callers that mutate the directory through other means
    // (e.g. repository sync into the same directory).
    std::unique_lock<std::shared_mutex> lock_exclusive() const { return std::unique_lock(mutex_); }

private:
    std::vector<StoredDataset> list_unlocked() const;
    std::string fresh_id() const;

    std::filesystem::path dir_;
    mutable std::shared_mutex mutex_;
};

} // namespace roofline
