#include "roofline/store.hpp"

#include "roofline/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace roofline {

namespace fs = std::filesystem;

bool is_valid_dataset_id(std::string_view id) {
    if (id.empty() || id.size() > 64) {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-';
    });
}

DatasetStore::DatasetStore(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (!fs::is_directory(dir_)) {
        throw Error("data directory " + dir_.string() + " does not exist and cannot be created");
    }
}

fs::path DatasetStore::path_for(std::string_view id) const {
    return dir_ / (std::string(id) + std::string(kDatasetExtension));
}

std::vector<StoredDataset> DatasetStore::list_unlocked() const {
    std::vector<StoredDataset> out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        const std::string name = entry.path().filename().string();
        if (!entry.is_regular_file() || !name.ends_with(kDatasetExtension)) {
            continue;
        }
        const std::string id = name.substr(0, name.size() - kDatasetExtension.size());
        if (!is_valid_dataset_id(id)) {
            continue;
        }
        try {
            out.push_back({id, load_dataset(read_file(entry.path()))});
        } catch (const Error&) {
            continue;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::vector<StoredDataset> DatasetStore::list() const {
    std::shared_lock lock(mutex_);
    return list_unlocked();
}

std::optional<StoredDataset> DatasetStore::get(std::string_view id) const {
    if (!is_valid_dataset_id(id)) {
        return std::nullopt;
    }
    std::shared_lock lock(mutex_);
    const fs::path path = path_for(id);
    if (!fs::is_regular_file(path)) {
        return std::nullopt;
    }
    return StoredDataset{std::string(id), load_dataset(read_file(path))};
}

std::string DatasetStore::fresh_id() const {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uniform_int_distribution<std::uint32_t> dist;
    for (;;) {
        std::ostringstream ss;
        ss << std::hex;
        ss.width(8);
        ss.fill('0');
        ss << dist(rng);
        std::string id = ss.str();
        if (!fs::exists(path_for(id))) {
            return id;
        }
    }
}

DatasetStore::PutResult DatasetStore::put(const Dataset& d) {
    std::unique_lock lock(mutex_);
    PutResult result;
    result.duplicates = find_duplicates(d, list_unlocked());
    result.id = fresh_id();
    write_file_atomic(path_for(result.id), save_dataset(d));
    return result;
}

} // namespace roofline
